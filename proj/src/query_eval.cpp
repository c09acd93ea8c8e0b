#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <set>

#include "rkg/errors.hpp"
#include "rkg/query.hpp"

namespace rkg {

namespace {

using Solution = std::map<std::string, Term>;

bool numeric_datatype(const std::string& dt) {
    return dt == vocab::kXsdInteger || dt == vocab::kXsdDecimal || dt == vocab::kXsdDouble ||
           dt == "http://www.w3.org/2001/XMLSchema#float" ||
           dt == "http://www.w3.org/2001/XMLSchema#long" ||
           dt == "http://www.w3.org/2001/XMLSchema#int" ||
           dt == "http://www.w3.org/2001/XMLSchema#short" ||
           dt == "http://www.w3.org/2001/XMLSchema#byte" ||
           dt == "http://www.w3.org/2001/XMLSchema#nonNegativeInteger" ||
           dt == "http://www.w3.org/2001/XMLSchema#positiveInteger" ||
           dt == "http://www.w3.org/2001/XMLSchema#negativeInteger" ||
           dt == "http://www.w3.org/2001/XMLSchema#nonPositiveInteger" ||
           dt == "http://www.w3.org/2001/XMLSchema#unsignedLong" ||
           dt == "http://www.w3.org/2001/XMLSchema#unsignedInt";
}

bool decimal_shaped(const std::string& lex) {
    std::size_t i = 0;
    if (i < lex.size() && (lex[i] == '+' || lex[i] == '-')) ++i;
    bool digits_before = false, digits_after = false, dot = false;
    while (i < lex.size() && std::isdigit(static_cast<unsigned char>(lex[i]))) {
        digits_before = true;
        ++i;
    }
    if (i < lex.size() && lex[i] == '.') {
        dot = true;
        ++i;
        while (i < lex.size() && std::isdigit(static_cast<unsigned char>(lex[i]))) {
            digits_after = true;
            ++i;
        }
    }
    if (i != lex.size()) return false;
    return digits_before || (dot && digits_after);
}

class Evaluator {
public:
    Evaluator(const GraphStore& store, const EvalOptions& options)
        : store_(store), options_(options) {}

    std::vector<Solution> eval_group(const GroupPattern& group,
                                     std::vector<Solution> input) {
        std::vector<const FilterPattern*> filters;
        std::vector<Solution> current = std::move(input);
        for (const PatternElement& elem : group.elements) {
            if (const auto* f = std::get_if<FilterPattern>(&elem)) {
                filters.push_back(f);
                continue;
            }
            std::vector<Solution> next;
            if (const auto* tp = std::get_if<TriplePattern>(&elem)) {
                for (const Solution& mu : current) extend_by_pattern(*tp, mu, next);
            } else if (const auto* opt = std::get_if<OptionalPattern>(&elem)) {
                for (const Solution& mu : current) {
                    std::vector<Solution> sub = eval_group(*opt->group, {mu});
                    if (sub.empty()) {
                        next.push_back(mu);
                    } else {
                        for (Solution& s : sub) next.push_back(std::move(s));
                    }
                }
            } else if (const auto* un = std::get_if<UnionPattern>(&elem)) {
                for (const Solution& mu : current) {
                    for (Solution& s : eval_group(*un->left, {mu})) next.push_back(std::move(s));
                    for (Solution& s : eval_group(*un->right, {mu})) next.push_back(std::move(s));
                }
            }
            current = std::move(next);
        }
        // filters run at the end of their group (standard group semantics)
        for (const FilterPattern* f : filters) {
            std::vector<Solution> kept;
            for (Solution& mu : current) {
                Value v = eval_expr(*f->expr, mu);
                if (!v.error && effective_boolean(v) == Truth::True) kept.push_back(std::move(mu));
            }
            current = std::move(kept);
        }
        return current;
    }

private:
    // --- pattern matching ---
    void check_deadline() {
        if (!options_.deadline) return;
        if (++ticks_ % 512 != 0) return;
        if (std::chrono::steady_clock::now() > *options_.deadline) throw EvalTimeout();
    }

    void extend_by_pattern(const TriplePattern& tp, const Solution& mu,
                           std::vector<Solution>& out) {
        auto bound = [&](const TermOrVar& tv) -> std::optional<Term> {
            if (const Term* t = std::get_if<Term>(&tv)) return *t;
            const Variable& v = std::get<Variable>(tv);
            auto it = mu.find(v.name);
            if (it != mu.end()) return it->second;
            return std::nullopt;
        };
        std::optional<Term> s = bound(tp.subject);
        std::optional<Term> p = bound(tp.predicate);
        std::optional<Term> o = bound(tp.object);

        store_.for_each_match(s, p, o, [&](const Triple& t) {
            check_deadline();
            Solution ext = mu;
            if (!unify(tp.subject, t.subject, ext)) return;
            if (!unify(tp.predicate, t.predicate, ext)) return;
            if (!unify(tp.object, t.object, ext)) return;
            out.push_back(std::move(ext));
        });
    }

    static bool unify(const TermOrVar& tv, const Term& value, Solution& mu) {
        const Variable* v = std::get_if<Variable>(&tv);
        if (!v) return true;  // constant already matched by the index scan
        auto [it, inserted] = mu.try_emplace(v->name, value);
        return inserted || it->second == value;
    }

    // --- expressions: three-valued logic ---
    struct Value {
        bool error = false;
        std::optional<Term> term;  // empty only when error
    };
    enum class Truth { True, False, Error };

    Value eval_expr(const Expression& e, const Solution& mu) {
        switch (e.kind) {
            case Expression::Kind::Value: {
                if (e.term) return Value{false, *e.term};
                auto it = mu.find(e.var->name);
                if (it == mu.end()) return Value{true, std::nullopt};
                return Value{false, it->second};
            }
            case Expression::Kind::Bound: {
                bool b = mu.count(e.var->name) != 0;
                return boolean(b);
            }
            case Expression::Kind::Not: {
                Truth t = truth(eval_expr(*e.lhs, mu));
                if (t == Truth::Error) return Value{true, std::nullopt};
                return boolean(t == Truth::False);
            }
            case Expression::Kind::And: {
                Truth a = truth(eval_expr(*e.lhs, mu));
                Truth b = truth(eval_expr(*e.rhs, mu));
                if (a == Truth::False || b == Truth::False) return boolean(false);
                if (a == Truth::Error || b == Truth::Error) return Value{true, std::nullopt};
                return boolean(true);
            }
            case Expression::Kind::Or: {
                Truth a = truth(eval_expr(*e.lhs, mu));
                Truth b = truth(eval_expr(*e.rhs, mu));
                if (a == Truth::True || b == Truth::True) return boolean(true);
                if (a == Truth::Error || b == Truth::Error) return Value{true, std::nullopt};
                return boolean(false);
            }
            case Expression::Kind::Compare: {
                Value a = eval_expr(*e.lhs, mu);
                Value b = eval_expr(*e.rhs, mu);
                if (a.error || b.error) return Value{true, std::nullopt};
                return compare(e.op, *a.term, *b.term);
            }
        }
        return Value{true, std::nullopt};
    }

    static Value boolean(bool b) {
        return Value{false,
                     Term{Literal::typed(b ? "true" : "false", std::string(vocab::kXsdBoolean))}};
    }

    Truth truth(const Value& v) {
        if (v.error) return Truth::Error;
        return effective_boolean(v);
    }

    Truth effective_boolean(const Value& v) {
        if (!v.term || !is_literal(*v.term)) return Truth::Error;
        const Literal& l = as_literal(*v.term);
        if (l.datatype == vocab::kXsdBoolean) {
            return l.lexical == "true" || l.lexical == "1" ? Truth::True : Truth::False;
        }
        if (auto n = numeric_value(*v.term)) return *n != 0.0 ? Truth::True : Truth::False;
        if (l.datatype == vocab::kXsdString || !l.lang.empty()) {
            return l.lexical.empty() ? Truth::False : Truth::True;
        }
        return Truth::Error;
    }

    Value compare(const std::string& op, const Term& a, const Term& b) {
        auto na = numeric_value(a);
        auto nb = numeric_value(b);
        if (na && nb) {
            double x = *na, y = *nb;
            if (op == "=") return boolean(x == y);
            if (op == "!=") return boolean(x != y);
            if (op == "<") return boolean(x < y);
            if (op == "<=") return boolean(x <= y);
            if (op == ">") return boolean(x > y);
            if (op == ">=") return boolean(x >= y);
        }
        if (op == "=" || op == "!=") {
            bool eq = a == b;
            // distinct literals of unknown datatypes cannot be proven
            // (un)equal by value; treat same-datatype comparison as lexical
            return boolean(op == "=" ? eq : !eq);
        }
        // ordering beyond numerics: codepoint comparison over plain strings
        if (is_literal(a) && is_literal(b)) {
            const Literal& la = as_literal(a);
            const Literal& lb = as_literal(b);
            bool stringish_a = la.datatype == vocab::kXsdString || !la.lang.empty();
            bool stringish_b = lb.datatype == vocab::kXsdString || !lb.lang.empty();
            if (stringish_a && stringish_b) {
                int c = la.lexical.compare(lb.lexical);
                if (op == "<") return boolean(c < 0);
                if (op == "<=") return boolean(c <= 0);
                if (op == ">") return boolean(c > 0);
                if (op == ">=") return boolean(c >= 0);
            }
        }
        return Value{true, std::nullopt};
    }

    const GraphStore& store_;
    const EvalOptions& options_;
    std::size_t ticks_ = 0;
};

void collect_pattern_variables(const GroupPattern& g, std::vector<std::string>& order,
                               std::set<std::string>& seen) {
    auto add = [&](const TermOrVar& tv) {
        if (const Variable* v = std::get_if<Variable>(&tv)) {
            if (seen.insert(v->name).second) order.push_back(v->name);
        }
    };
    for (const PatternElement& e : g.elements) {
        if (const auto* tp = std::get_if<TriplePattern>(&e)) {
            add(tp->subject);
            add(tp->predicate);
            add(tp->object);
        } else if (const auto* opt = std::get_if<OptionalPattern>(&e)) {
            collect_pattern_variables(*opt->group, order, seen);
        } else if (const auto* un = std::get_if<UnionPattern>(&e)) {
            collect_pattern_variables(*un->left, order, seen);
            collect_pattern_variables(*un->right, order, seen);
        }
    }
}

struct RowLess {
    const std::vector<OrderKey>& keys;
    const std::vector<std::string>& header;

    bool operator()(const std::vector<std::optional<Term>>& a,
                    const std::vector<std::optional<Term>>& b) const {
        for (const OrderKey& k : keys) {
            auto it = std::find(header.begin(), header.end(), k.var.name);
            if (it == header.end()) continue;
            auto idx = static_cast<std::size_t>(it - header.begin());
            const auto& x = a[idx];
            const auto& y = b[idx];
            if (k.ascending) {
                if (order_by_less(x, y)) return true;
                if (order_by_less(y, x)) return false;
            } else {
                if (order_by_less(y, x)) return true;
                if (order_by_less(x, y)) return false;
            }
        }
        return false;
    }
};

}  // namespace

std::optional<double> numeric_value(const Term& t) {
    if (!is_literal(t)) return std::nullopt;
    const Literal& l = as_literal(t);
    if (!l.lang.empty()) return std::nullopt;
    bool sniffed = decimal_shaped(l.lexical);
    if (!numeric_datatype(l.datatype) && !(l.datatype == vocab::kXsdString && sniffed))
        return std::nullopt;
    if (!sniffed) {
        // numeric datatype with exponent or odd lexical form: accept what
        // strtod accepts entirely, else treat as non-numeric
        const char* begin = l.lexical.c_str();
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin || *end != '\0') return std::nullopt;
        return v;
    }
    return std::stod(l.lexical);
}

bool order_by_less(const std::optional<Term>& a, const std::optional<Term>& b) {
    // unbound sorts before bound
    if (!a || !b) return !a && b;

    auto rank = [](const Term& t) {
        if (is_literal(t)) return 0;  // literals first
        if (is_iri(t)) return 1;      // then IRIs
        return 2;                     // then blank nodes
    };
    int ra = rank(*a), rb = rank(*b);
    if (ra != rb) return ra < rb;

    if (ra == 0) {
        auto na = numeric_value(*a);
        auto nb = numeric_value(*b);
        if (na && nb) {
            if (*na != *nb) return *na < *nb;
            return false;
        }
        return as_literal(*a).lexical < as_literal(*b).lexical;
    }
    if (ra == 1) return as_iri(*a).value < as_iri(*b).value;
    return as_blank(*a).label < as_blank(*b).label;
}

SolutionTable evaluate(const QueryAST& query, const GraphStore& store,
                       const EvalOptions& options) {
    Evaluator ev(store, options);
    // an empty pattern matches nothing (a query has to ask for something)
    std::vector<Solution> solutions;
    if (!query.pattern.elements.empty()) {
        solutions = ev.eval_group(query.pattern, {Solution{}});
    }

    SolutionTable table;
    if (query.select_all) {
        std::set<std::string> seen;
        collect_pattern_variables(query.pattern, table.header, seen);
    } else {
        for (const Variable& v : query.projection) table.header.push_back(v.name);
    }

    // ORDER BY runs on full solutions before projection
    if (!query.order_by.empty()) {
        std::vector<std::string> sort_header;
        std::set<std::string> seen;
        collect_pattern_variables(query.pattern, sort_header, seen);
        std::vector<std::vector<std::optional<Term>>> sort_rows;
        sort_rows.reserve(solutions.size());
        std::vector<std::size_t> index(solutions.size());
        for (std::size_t i = 0; i < solutions.size(); ++i) index[i] = i;
        for (const Solution& mu : solutions) {
            std::vector<std::optional<Term>> row;
            row.reserve(sort_header.size());
            for (const std::string& var : sort_header) {
                auto it = mu.find(var);
                row.push_back(it == mu.end() ? std::optional<Term>{} : std::optional<Term>{it->second});
            }
            sort_rows.push_back(std::move(row));
        }
        RowLess less{query.order_by, sort_header};
        std::stable_sort(index.begin(), index.end(), [&](std::size_t i, std::size_t j) {
            return less(sort_rows[i], sort_rows[j]);
        });
        std::vector<Solution> sorted;
        sorted.reserve(solutions.size());
        for (std::size_t i : index) sorted.push_back(std::move(solutions[i]));
        solutions = std::move(sorted);
    }

    for (const Solution& mu : solutions) {
        std::vector<std::optional<Term>> row;
        row.reserve(table.header.size());
        for (const std::string& var : table.header) {
            auto it = mu.find(var);
            row.push_back(it == mu.end() ? std::optional<Term>{} : std::optional<Term>{it->second});
        }
        table.rows.push_back(std::move(row));
    }

    if (query.distinct) {
        std::set<std::string> seen;
        std::vector<std::vector<std::optional<Term>>> kept;
        for (auto& row : table.rows) {
            std::string key;
            for (const auto& cell : row) {
                key += cell ? to_ntriples(*cell) : "\x01";
                key += "\x02";
            }
            if (seen.insert(key).second) kept.push_back(std::move(row));
        }
        table.rows = std::move(kept);
    }

    std::size_t offset = query.offset.value_or(0);
    if (offset > 0) {
        if (offset >= table.rows.size()) {
            table.rows.clear();
        } else {
            table.rows.erase(table.rows.begin(),
                             table.rows.begin() + static_cast<std::ptrdiff_t>(offset));
        }
    }
    if (query.limit && table.rows.size() > *query.limit) table.rows.resize(*query.limit);

    return table;
}

}  // namespace rkg
