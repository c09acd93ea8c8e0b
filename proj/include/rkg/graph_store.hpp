#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "rkg/prefix_map.hpp"
#include "rkg/term.hpp"

namespace rkg {

/// In-memory triple set with three covering indexes (SPO, POS, OSP) so
/// that every wildcard combination of a match is answered by one ordered
/// range scan. Set semantics: duplicate inserts are ignored.
///
/// Concurrency contract: single writer, multiple readers. All mutation
/// must be externally synchronized; match/serialize are safe to run
/// concurrently once loading has completed.
class GraphStore {
public:
    /// Inserts `t`. Returns true iff the triple was absent before.
    /// Throws StoreError when the triple is structurally invalid
    /// (literal subject, non-IRI predicate).
    bool add(const Triple& t);

    bool contains(const Triple& t) const;
    std::size_t size() const { return spo_.size(); }
    bool empty() const { return spo_.empty(); }

    /// All triples agreeing with the bound positions; unset positions are
    /// wildcards. Order is unspecified but deterministic for a fixed
    /// store state.
    std::vector<Triple> match(const std::optional<Term>& s,
                              const std::optional<Term>& p,
                              const std::optional<Term>& o) const;

    void for_each_match(const std::optional<Term>& s,
                        const std::optional<Term>& p,
                        const std::optional<Term>& o,
                        const std::function<void(const Triple&)>& fn) const;

    std::vector<Triple> triples() const;

    PrefixMap& prefixes() { return prefixes_; }
    const PrefixMap& prefixes() const { return prefixes_; }

    /// Full-enumeration self-check: every index holds exactly the triple
    /// set. Intended for tests and debugging.
    bool indexes_coherent() const;

private:
    using Key = std::array<std::uint32_t, 3>;  // interned (s, p, o)

    std::uint32_t intern(const Term& t);
    std::optional<std::uint32_t> lookup(const Term& t) const;
    Triple materialize(const Key& spo) const;

    template <typename Fn>
    void scan(const std::optional<Term>& s, const std::optional<Term>& p,
              const std::optional<Term>& o, Fn&& fn) const;

    std::vector<Term> terms_;
    std::unordered_map<std::string, std::uint32_t> term_ids_;  // canonical form -> id

    std::set<Key> spo_;  // (s, p, o)
    std::set<Key> pos_;  // (p, o, s)
    std::set<Key> osp_;  // (o, s, p)

    PrefixMap prefixes_;
};

}  // namespace rkg
