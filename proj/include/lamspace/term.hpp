#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace lamspace {

inline std::uint64_t bits(std::uint64_t n) { return static_cast<std::uint64_t>(std::bit_width(n)); }

enum class Kind : std::uint8_t { Var, Lam, App };

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
    Kind kind;
    std::uint32_t index = 0;  // de Bruijn, 1-based (Var only)
    std::string name;         // display name (Lam only), ignored by equality
    Term a;                   // Lam body / App left
    Term b;                   // App right
};

inline Term var(std::uint32_t i) {
    if (i == 0) throw std::invalid_argument("de Bruijn indices start at 1");
    return std::make_shared<const TermNode>(TermNode{Kind::Var, i, {}, nullptr, nullptr});
}
inline Term lam(Term body, std::string name = {}) {
    return std::make_shared<const TermNode>(TermNode{Kind::Lam, 0, std::move(name), std::move(body), nullptr});
}
inline Term app(Term l, Term r) {
    return std::make_shared<const TermNode>(TermNode{Kind::App, 0, {}, std::move(l), std::move(r)});
}
inline Term app(Term l, Term r, Term r2) { return app(app(std::move(l), std::move(r)), std::move(r2)); }

struct ParseError : std::runtime_error {
    int line, column;
    ParseError(const std::string& msg, int l, int c)
        : std::runtime_error(msg + " at " + std::to_string(l) + ":" + std::to_string(c)), line(l), column(c) {}
};

struct FuelExhausted : std::runtime_error {
    FuelExhausted() : std::runtime_error("fuel exhausted") {}
};

// ---------------------------------------------------------------------------
// structural helpers

inline bool term_equal(const Term& x, const Term& y) {
    // iterative, with pointer short-cut so shared DAGs stay cheap
    std::vector<std::pair<const TermNode*, const TermNode*>> todo{{x.get(), y.get()}};
    std::unordered_set<std::uint64_t> seen;
    while (!todo.empty()) {
        auto [p, q] = todo.back();
        todo.pop_back();
        if (p == q) continue;
        if (p->kind != q->kind) return false;
        switch (p->kind) {
        case Kind::Var:
            if (p->index != q->index) return false;
            break;
        case Kind::Lam:
            todo.push_back({p->a.get(), q->a.get()});
            break;
        case Kind::App: {
            auto key = (reinterpret_cast<std::uintptr_t>(p) * 1000003u) ^ reinterpret_cast<std::uintptr_t>(q);
            if (!seen.insert(key).second) break;
            todo.push_back({p->a.get(), q->a.get()});
            todo.push_back({p->b.get(), q->b.get()});
            break;
        }
        }
    }
    return true;
}

inline std::uint64_t constructor_size(const Term& t) {
    std::unordered_map<const TermNode*, std::uint64_t> memo;
    auto go = [&](auto&& self, const TermNode* n) -> std::uint64_t {
        if (n->kind == Kind::Var) return 1;
        if (auto it = memo.find(n); it != memo.end()) return it->second;
        std::uint64_t s = n->kind == Kind::Lam ? self(self, n->a.get()) + 1
                                                 : self(self, n->a.get()) + self(self, n->b.get()) + 1;
        memo[n] = s;
        return s;
    };
    return go(go, t.get());
}

// number of enclosing binders a term still needs (0 = closed)
inline std::uint32_t free_depth(const Term& t) {
    std::unordered_map<const TermNode*, std::uint32_t> memo;
    auto go = [&](auto&& self, const TermNode* n) -> std::uint32_t {
        if (n->kind == Kind::Var) return n->index;
        if (auto it = memo.find(n); it != memo.end()) return it->second;
        std::uint32_t r;
        if (n->kind == Kind::Lam) {
            auto d = self(self, n->a.get());
            r = d > 0 ? d - 1 : 0;
        } else {
            r = std::max(self(self, n->a.get()), self(self, n->b.get()));
        }
        memo[n] = r;
        return r;
    };
    return go(go, t.get());
}

inline bool is_closed(const Term& t) { return free_depth(t) == 0; }

// ---------------------------------------------------------------------------
// parsing

namespace detail {

struct Lexer {
    const std::string& s;
    std::size_t i = 0;
    int line = 1, col = 1;

    explicit Lexer(const std::string& src) : s(src) {}

    void advance(std::size_t n = 1) {
        while (n-- && i < s.size()) {
            if (s[i] == '\n') {
                ++line;
                col = 1;
            } else if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
                ++col;
            }
            ++i;
        }
    }
    void skip_ws() {
        while (i < s.size()) {
            char c = s[i];
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                advance();
            } else if (c == '#') {
                while (i < s.size() && s[i] != '\n') advance();
            } else {
                break;
            }
        }
    }
    bool at_lambda() {
        skip_ws();
        if (i < s.size() && s[i] == '\\') return true;
        return s.compare(i, 2, "\xCE\xBB") == 0;  // λ
    }
    void eat_lambda() {
        if (s[i] == '\\') advance();
        else advance(2);
    }
    static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }
    bool at_ident() {
        skip_ws();
        return i < s.size() && ident_start(s[i]);
    }
    std::string ident() {
        skip_ws();
        if (i >= s.size() || !ident_start(s[i])) fail("expected identifier");
        std::size_t b = i;
        while (i < s.size() && ident_char(s[i])) advance();
        return s.substr(b, i - b);
    }
    bool peek(char c) {
        skip_ws();
        return i < s.size() && s[i] == c;
    }
    void expect(char c) {
        if (!peek(c)) fail(std::string("expected '") + c + "'");
        advance();
    }
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line, col); }
};

struct Parser {
    Lexer lx;
    const std::map<std::string, Term>* defs;
    bool open;
    std::vector<std::string> scope;  // innermost last
    std::vector<std::string> free_names;

    Parser(const std::string& src, const std::map<std::string, Term>* d, bool o) : lx(src), defs(d), open(o) {}

    Term term() {
        if (lx.at_lambda()) {
            lx.eat_lambda();
            std::vector<std::string> names{lx.ident()};
            while (lx.at_ident()) names.push_back(lx.ident());
            lx.expect('.');
            for (auto& n : names) scope.push_back(n);
            Term body = term();
            for (std::size_t k = names.size(); k-- > 0;) {
                scope.pop_back();
                body = lam(body, names[k]);
            }
            return body;
        }
        Term t = atom();
        while (true) {
            if (lx.at_lambda()) return app(t, term());
            if (lx.at_ident() || lx.peek('(')) {
                t = app(t, atom());
                continue;
            }
            return t;
        }
    }

    Term atom() {
        if (lx.peek('(')) {
            lx.advance();
            Term t = term();
            lx.expect(')');
            return t;
        }
        int l = lx.line, c = lx.col;
        std::string name = lx.ident();
        for (std::size_t k = scope.size(); k-- > 0;)
            if (scope[k] == name) return var(static_cast<std::uint32_t>(scope.size() - k));
        if (defs) {
            if (auto it = defs->find(name); it != defs->end()) return it->second;
        }
        if (!open) throw ParseError("unbound variable '" + name + "'", l, c);
        std::size_t pos = 0;
        while (pos < free_names.size() && free_names[pos] != name) ++pos;
        if (pos == free_names.size()) free_names.push_back(name);
        return var(static_cast<std::uint32_t>(scope.size() + pos + 1));
    }
};

}  // namespace detail

// Closed mode rejects unbound names; open mode numbers them past the binders
// in order of first appearance. Identifiers found in `defs` are replaced by
// the (closed) definitions.
inline Term parse(const std::string& text, const std::map<std::string, Term>* defs = nullptr, bool open = false) {
    detail::Parser p(text, defs, open);
    Term t = p.term();
    p.lx.skip_ws();
    if (p.lx.i != text.size()) p.lx.fail("unexpected trailing input");
    return t;
}

inline Term parse_open(const std::string& text) { return parse(text, nullptr, true); }

// ---------------------------------------------------------------------------
// printing

inline std::string render(const Term& t) {
    std::string out;
    std::vector<std::string> scope;
    auto fresh = [&](std::string base) {
        if (base.empty()) base = "x";
        auto taken = [&](const std::string& n) {
            for (auto& s : scope)
                if (s == n) return true;
            return false;
        };
        if (!taken(base)) return base;
        for (int k = 1;; ++k) {
            std::string cand = base + std::to_string(k);
            if (!taken(cand)) return cand;
        }
    };
    auto go = [&](auto&& self, const TermNode* n, bool arg_pos, bool left_of_app) -> void {
        switch (n->kind) {
        case Kind::Var:
            if (n->index <= scope.size()) out += scope[scope.size() - n->index];
            else out += "_free" + std::to_string(n->index - scope.size());
            break;
        case Kind::Lam: {
            bool paren = arg_pos || left_of_app;
            if (paren) out += '(';
            std::string nm = fresh(n->name);
            out += "\\" + nm + ". ";
            scope.push_back(nm);
            self(self, n->a.get(), false, false);
            scope.pop_back();
            if (paren) out += ')';
            break;
        }
        case Kind::App:
            if (arg_pos) out += '(';
            self(self, n->a.get(), false, true);
            out += ' ';
            self(self, n->b.get(), true, false);
            if (arg_pos) out += ')';
            break;
        }
    };
    go(go, t.get(), false, false);
    return out;
}

// ---------------------------------------------------------------------------
// tree addresses

enum class LabelKind : std::uint8_t { Lambda, Apply, DeBruijn, Undefined };

struct Label {
    LabelKind kind = LabelKind::Undefined;
    std::uint32_t index = 0;
    bool operator==(const Label&) const = default;
    static Label lambda() { return {LabelKind::Lambda, 0}; }
    static Label apply() { return {LabelKind::Apply, 0}; }
    static Label db(std::uint32_t i) { return {LabelKind::DeBruijn, i}; }
    static Label undefined() { return {LabelKind::Undefined, 0}; }
};

inline std::string to_string(const Label& l) {
    switch (l.kind) {
    case LabelKind::Lambda: return "Lambda";
    case LabelKind::Apply: return "Apply";
    case LabelKind::DeBruijn: return "dB(" + std::to_string(l.index) + ")";
    case LabelKind::Undefined: return "Undefined";
    }
    return "?";
}

using TreeAddress = std::vector<bool>;

inline TreeAddress parse_address(const std::string& s) {
    TreeAddress a;
    for (char c : s) {
        if (c == '0') a.push_back(false);
        else if (c == '1') a.push_back(true);
        else throw std::invalid_argument("address must be a string over {0,1}");
    }
    return a;
}

inline std::string address_string(const TreeAddress& a) {
    std::string s;
    for (bool b : a) s += b ? '1' : '0';
    return s;
}

inline Label constructor_at_tree_address(const Term& t, const TreeAddress& a) {
    const TermNode* n = t.get();
    for (bool bit : a) {
        switch (n->kind) {
        case Kind::Var: return Label::undefined();
        case Kind::Lam: n = n->a.get(); break;
        case Kind::App: n = bit ? n->b.get() : n->a.get(); break;
        }
    }
    switch (n->kind) {
    case Kind::Var: return Label::db(n->index);
    case Kind::Lam: return Label::lambda();
    case Kind::App: return Label::apply();
    }
    return Label::undefined();
}

// ---------------------------------------------------------------------------
// eta, Λ_det

inline Term eta_expand(Term t, std::uint32_t n) {
    // t is closed, so no shifting is needed under the new binder
    for (std::uint32_t k = 0; k < n; ++k) t = lam(app(t, var(1)), "x");
    return t;
}

inline Term shift(const Term& t, std::uint32_t by, std::uint32_t cutoff = 0) {
    if (by == 0) return t;
    switch (t->kind) {
    case Kind::Var: return t->index > cutoff ? var(t->index + by) : t;
    case Kind::Lam: return lam(shift(t->a, by, cutoff + 1), t->name);
    case Kind::App: return app(shift(t->a, by, cutoff), shift(t->b, by, cutoff));
    }
    return t;
}

inline bool in_lambda_det(const Term& t) {
    std::unordered_set<const TermNode*> seen;
    std::vector<const TermNode*> todo{t.get()};
    while (!todo.empty()) {
        auto n = todo.back();
        todo.pop_back();
        if (!seen.insert(n).second) continue;
        if (n->kind == Kind::Lam) todo.push_back(n->a.get());
        if (n->kind == Kind::App) {
            if (n->b->kind == Kind::App) return false;
            todo.push_back(n->a.get());
            todo.push_back(n->b.get());
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// substitution-based weak head reduction (the oracle)

struct WhnfResult {
    Term value;
    std::uint64_t steps = 0;
};

namespace detail {

// body[1 := u] where u is closed and body lives under exactly one binder
// more than u. Memoised per node so shared sub-terms are rebuilt once.
inline Term subst_closed(const Term& body, const Term& u, std::uint64_t& budget) {
    struct KeyHash {
        std::size_t operator()(const std::pair<const TermNode*, std::uint32_t>& k) const {
            return std::hash<const void*>()(k.first) ^ (static_cast<std::size_t>(k.second) * 0x9E3779B97F4A7C15ull);
        }
    };
    std::unordered_map<std::pair<const TermNode*, std::uint32_t>, Term, KeyHash> memo_deep;
    auto go = [&](auto&& self, const Term& t, std::uint32_t depth) -> Term {
        switch (t->kind) {
        case Kind::Var:
            if (t->index == depth + 1) return u;
            if (t->index > depth + 1) return var(t->index - 1);
            return t;
        default: break;
        }
        auto key = std::make_pair(t.get(), depth);
        if (auto it = memo_deep.find(key); it != memo_deep.end()) return it->second;
        if (budget == 0) throw FuelExhausted();
        --budget;
        Term r;
        if (t->kind == Kind::Lam) {
            auto nb = self(self, t->a, depth + 1);
            r = nb == t->a ? t : lam(nb, t->name);
        } else {
            auto l = self(self, t->a, depth);
            auto rr = self(self, t->b, depth);
            r = (l == t->a && rr == t->b) ? t : app(l, rr);
        }
        memo_deep.emplace(key, r);
        return r;
    };
    return go(go, body, 0);
}

}  // namespace detail

// Closed CbN weak head evaluation: (λx.t) u r1..rh -> t{x<-u} r1..rh.
// `node_budget` bounds the nodes rebuilt by substitution over the whole run;
// exceeding it is reported like fuel exhaustion.
inline WhnfResult reference_whnf(const Term& t0, std::uint64_t fuel, std::uint64_t node_budget = 4'000'000) {
    if (!is_closed(t0)) throw std::invalid_argument("reference_whnf expects a closed term");
    Term head = t0;
    std::vector<Term> args;  // top of spine at back
    std::uint64_t steps = 0;
    while (true) {
        switch (head->kind) {
        case Kind::App:
            args.push_back(head->b);
            head = head->a;
            break;
        case Kind::Lam:
            if (args.empty()) return {head, steps};
            if (steps == fuel) throw FuelExhausted();
            head = detail::subst_closed(head->a, args.back(), node_budget);
            args.pop_back();
            ++steps;
            break;
        case Kind::Var: throw std::logic_error("free variable in head position");
        }
    }
}

// ---------------------------------------------------------------------------
// deterministic generator

struct GenOptions {
    bool det_only = false;  // arguments restricted to variables / abstractions
};

namespace detail {

struct Gen {
    std::mt19937_64 rng;
    GenOptions opt;
    std::uint64_t pick(std::uint64_t n) { return n <= 1 ? 0 : rng() % n; }
    bool coin(unsigned pct) { return rng() % 100 < pct; }

    Term var_at(std::uint32_t depth) {
        // favour the nearest binders, which repeats variables
        std::uint32_t i = 1 + static_cast<std::uint32_t>(pick(depth));
        if (depth > 1 && coin(40)) i = 1 + static_cast<std::uint32_t>(pick(std::min<std::uint32_t>(depth, 2)));
        return var(i);
    }

    static std::uint64_t min_size(std::uint32_t depth) { return depth == 0 ? 2 : 1; }

    Term arg(std::uint32_t depth, std::uint64_t budget) {
        if (!opt.det_only) return term(depth, budget);
        if (depth > 0 && (budget < 2 || coin(45))) return var_at(depth);
        return lam(term(depth + 1, budget - 1));
    }
    std::uint64_t arg_min(std::uint32_t depth) const { return depth == 0 ? 2 : 1; }

    Term term(std::uint32_t depth, std::uint64_t budget) {
        std::uint64_t need_app = min_size(depth) + arg_min(depth) + 1;
        bool can_var = depth > 0;
        bool can_lam = budget >= 2;
        bool can_app = budget >= need_app;
        if (can_var && (budget == 1 || (!can_app && coin(50)))) return var_at(depth);
        unsigned r = static_cast<unsigned>(rng() % 100);
        if (can_app && (r < 55 || !can_lam)) {
            std::uint64_t rest = budget - 1;
            // left side gets the larger share: application spines
            std::uint64_t lo = min_size(depth), hi = rest - arg_min(depth);
            std::uint64_t lsz = lo + pick(hi - lo + 1);
            if (coin(60)) lsz = std::max(lsz, lo + (hi - lo) / 2);
            std::uint64_t rsz = rest - lsz;
            if (rsz > 1 && coin(50)) rsz = arg_min(depth) + pick(rsz - arg_min(depth) + 1);
            Term l = term(depth, lsz);
            return app(l, arg(depth, rsz));
        }
        if (can_var && r < 75) return var_at(depth);
        if (can_lam) return lam(term(depth + 1, budget - 1));
        return var_at(depth);
    }
};

}  // namespace detail

inline Term generate_closed_term(std::uint64_t seed, std::uint64_t size_budget, GenOptions opt = {}) {
    if (size_budget < 2) throw std::invalid_argument("size budget must be at least 2");
    detail::Gen g{std::mt19937_64(seed * 0x9E3779B97F4A7C15ull + 1), opt};
    return g.term(0, size_budget);
}

}  // namespace lamspace
