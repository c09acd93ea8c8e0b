#include "rkg/graph_store.hpp"

#include <algorithm>

#include "rkg/errors.hpp"

namespace rkg {

namespace {

constexpr std::uint32_t kMax = 0xffffffffu;

std::array<std::uint32_t, 3> rotate_pos(const std::array<std::uint32_t, 3>& spo) {
    return {spo[1], spo[2], spo[0]};
}
std::array<std::uint32_t, 3> rotate_osp(const std::array<std::uint32_t, 3>& spo) {
    return {spo[2], spo[0], spo[1]};
}

}  // namespace

std::uint32_t GraphStore::intern(const Term& t) {
    std::string key = to_ntriples(t);
    auto it = term_ids_.find(key);
    if (it != term_ids_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(terms_.size());
    terms_.push_back(t);
    term_ids_.emplace(std::move(key), id);
    return id;
}

std::optional<std::uint32_t> GraphStore::lookup(const Term& t) const {
    auto it = term_ids_.find(to_ntriples(t));
    if (it == term_ids_.end()) return std::nullopt;
    return it->second;
}

Triple GraphStore::materialize(const Key& spo) const {
    return Triple{terms_[spo[0]], terms_[spo[1]], terms_[spo[2]]};
}

bool GraphStore::add(const Triple& t) {
    if (!structurally_valid(t)) {
        throw StoreError("structurally invalid triple: " + to_ntriples(t.subject) + " " +
                         to_ntriples(t.predicate) + " " + to_ntriples(t.object));
    }
    Key key{intern(t.subject), intern(t.predicate), intern(t.object)};
    auto [it, inserted] = spo_.insert(key);
    if (!inserted) return false;
    pos_.insert(rotate_pos(key));
    osp_.insert(rotate_osp(key));
    return true;
}

bool GraphStore::contains(const Triple& t) const {
    auto s = lookup(t.subject);
    auto p = lookup(t.predicate);
    auto o = lookup(t.object);
    if (!s || !p || !o) return false;
    return spo_.count({*s, *p, *o}) != 0;
}

template <typename Fn>
void GraphStore::scan(const std::optional<Term>& s, const std::optional<Term>& p,
                      const std::optional<Term>& o, Fn&& fn) const {
    std::optional<std::uint32_t> sid, pid, oid;
    if (s) {
        sid = lookup(*s);
        if (!sid) return;
    }
    if (p) {
        pid = lookup(*p);
        if (!pid) return;
    }
    if (o) {
        oid = lookup(*o);
        if (!oid) return;
    }

    auto range = [&](const std::set<Key>& index, std::uint32_t a,
                     std::optional<std::uint32_t> b) {
        Key lo{a, b.value_or(0), 0};
        Key hi{a, b.value_or(kMax), kMax};
        return std::make_pair(index.lower_bound(lo), index.upper_bound(hi));
    };

    if (sid) {
        // SPO serves (s,*,*), (s,p,*), (s,p,o); OSP serves (s,*,o).
        if (!pid && oid) {
            auto [lo, hi] = range(osp_, *oid, sid);
            for (auto it = lo; it != hi; ++it) fn(Key{(*it)[1], (*it)[2], (*it)[0]});
            return;
        }
        auto [lo, hi] = range(spo_, *sid, pid);
        for (auto it = lo; it != hi; ++it) {
            if (oid && (*it)[2] != *oid) continue;
            fn(*it);
        }
        return;
    }
    if (pid) {
        // POS serves (*,p,*) and (*,p,o).
        auto [lo, hi] = range(pos_, *pid, oid);
        for (auto it = lo; it != hi; ++it) fn(Key{(*it)[2], (*it)[0], (*it)[1]});
        return;
    }
    if (oid) {
        // OSP serves (*,*,o).
        auto [lo, hi] = range(osp_, *oid, std::nullopt);
        for (auto it = lo; it != hi; ++it) fn(Key{(*it)[1], (*it)[2], (*it)[0]});
        return;
    }
    for (const Key& k : spo_) fn(k);
}

std::vector<Triple> GraphStore::match(const std::optional<Term>& s, const std::optional<Term>& p,
                                      const std::optional<Term>& o) const {
    std::vector<Triple> out;
    scan(s, p, o, [&](const Key& k) { out.push_back(materialize(k)); });
    return out;
}

void GraphStore::for_each_match(const std::optional<Term>& s, const std::optional<Term>& p,
                                const std::optional<Term>& o,
                                const std::function<void(const Triple&)>& fn) const {
    scan(s, p, o, [&](const Key& k) { fn(materialize(k)); });
}

std::vector<Triple> GraphStore::triples() const {
    std::vector<Triple> out;
    out.reserve(spo_.size());
    for (const Key& k : spo_) out.push_back(materialize(k));
    return out;
}

bool GraphStore::indexes_coherent() const {
    if (pos_.size() != spo_.size() || osp_.size() != spo_.size()) return false;
    for (const Key& k : spo_) {
        if (pos_.count(rotate_pos(k)) == 0) return false;
        if (osp_.count(rotate_osp(k)) == 0) return false;
    }
    for (const Key& k : pos_) {
        if (spo_.count(Key{k[2], k[0], k[1]}) == 0) return false;
    }
    for (const Key& k : osp_) {
        if (spo_.count(Key{k[1], k[2], k[0]}) == 0) return false;
    }
    return true;
}

}  // namespace rkg
