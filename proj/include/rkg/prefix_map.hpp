#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rkg/term.hpp"

namespace rkg {

/// Ordered prefix-label -> namespace table. The empty label is the
/// default prefix (written ':' in Turtle and queries). Re-declaring a
/// label overwrites the binding and records a warning.
class PrefixMap {
public:
    void declare(const std::string& label, const std::string& namespace_iri);

    std::optional<std::string> find(const std::string& label) const;
    bool has(const std::string& label) const { return map_.count(label) != 0; }

    /// Expands "prefix:local". Throws ResolveError naming the prefix when
    /// it is not declared.
    Iri resolve(const std::string& curie) const;
    Iri resolve(const std::string& prefix, const std::string& local) const;

    /// Longest-namespace-match compaction. Returns "prefix:local" when
    /// some declared namespace prefixes `iri` and the remainder is a
    /// local name that survives a Turtle round trip; empty otherwise.
    std::string shorten(const std::string& iri) const;

    const std::map<std::string, std::string>& entries() const { return map_; }
    const std::vector<std::string>& warnings() const { return warnings_; }
    std::size_t size() const { return map_.size(); }

    /// Copies every binding of `other` into this map (re-declaration
    /// rules apply).
    void merge(const PrefixMap& other);

private:
    std::map<std::string, std::string> map_;
    std::vector<std::string> warnings_;
};

/// True when `local` can be written as the local part of a CURIE in the
/// Turtle subset this project emits and re-parses.
bool is_safe_local_name(const std::string& local);

}  // namespace rkg
