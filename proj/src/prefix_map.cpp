#include "rkg/prefix_map.hpp"

#include <cctype>

#include "rkg/errors.hpp"

namespace rkg {

void PrefixMap::declare(const std::string& label, const std::string& namespace_iri) {
    auto it = map_.find(label);
    if (it != map_.end()) {
        if (it->second != namespace_iri) {
            warnings_.push_back("prefix '" + label + ":' re-declared, was <" + it->second +
                                ">, now <" + namespace_iri + ">");
        }
        it->second = namespace_iri;
        return;
    }
    map_.emplace(label, namespace_iri);
}

std::optional<std::string> PrefixMap::find(const std::string& label) const {
    auto it = map_.find(label);
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

Iri PrefixMap::resolve(const std::string& prefix, const std::string& local) const {
    auto ns = find(prefix);
    if (!ns) throw ResolveError(prefix);
    return Iri(*ns + local);
}

Iri PrefixMap::resolve(const std::string& curie) const {
    auto colon = curie.find(':');
    if (colon == std::string::npos)
        throw ResolveError(curie);  // not prefix:local at all
    return resolve(curie.substr(0, colon), curie.substr(colon + 1));
}

std::string PrefixMap::shorten(const std::string& iri) const {
    std::size_t best_len = 0;
    const std::string* best_label = nullptr;
    for (const auto& [label, ns] : map_) {
        if (ns.size() > best_len && ns.size() <= iri.size() && iri.compare(0, ns.size(), ns) == 0) {
            best_len = ns.size();
            best_label = &label;
        }
    }
    if (!best_label) return "";
    std::string local = iri.substr(best_len);
    if (!is_safe_local_name(local)) return "";
    return *best_label + ":" + local;
}

void PrefixMap::merge(const PrefixMap& other) {
    for (const auto& [label, ns] : other.entries()) declare(label, ns);
}

bool is_safe_local_name(const std::string& local) {
    if (local.empty()) return false;
    auto word_char = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    if (!word_char(local.front())) return false;
    if (local.back() == '.' || local.back() == '-') return false;
    for (char c : local) {
        if (!word_char(c) && c != '-' && c != '.') return false;
    }
    return true;
}

}  // namespace rkg
