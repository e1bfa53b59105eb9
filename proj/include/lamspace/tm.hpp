#pragma once

#include <deque>
#include <fstream>
#include <sstream>
#include <variant>

#include "encodings.hpp"
#include "machines.hpp"

namespace lamspace {

// ---------------------------------------------------------------------------
// log-sensitive Turing machines: read-only input over {0,1,L,R}, one work
// tape over {0,1,_}

enum class Move : std::uint8_t { L, R, S };

struct TMAction {
    std::size_t next;
    char write;
    Move imove;
    Move wmove;
};

struct TMDesc {
    std::vector<std::string> states;
    std::size_t init = 0, accept = 0, reject = 0;
    // key: (state, input char, work char)
    std::map<std::tuple<std::size_t, char, char>, TMAction> table;

    std::size_t state_index(const std::string& s) const {
        for (std::size_t k = 0; k < states.size(); ++k)
            if (states[k] == s) return k;
        throw std::invalid_argument("unknown state '" + s + "'");
    }
    const TMAction* find(std::size_t q, char ic, char wc) const {
        auto it = table.find({q, ic, wc});
        return it == table.end() ? nullptr : &it->second;
    }
    bool is_final(std::size_t q) const { return q == accept || q == reject; }
};

inline constexpr std::array<char, 4> tm_input_chars{'0', '1', 'L', 'R'};
inline constexpr std::array<char, 3> tm_work_chars{'0', '1', '_'};

struct TMParseError : std::runtime_error {
    std::size_t line;
    TMParseError(const std::string& msg, std::size_t l)
        : std::runtime_error("line " + std::to_string(l) + ": " + msg), line(l) {}
};

inline TMDesc parse_tm(const std::string& text) {
    TMDesc m;
    std::optional<std::string> init, accept, reject;
    struct Row {
        std::size_t line;
        std::vector<std::string> w;
    };
    std::vector<Row> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        std::vector<std::string> words;
        for (std::string w; ls >> w;) words.push_back(w);
        auto single = [&](std::optional<std::string>& slot) {
            if (words.size() != 1) throw TMParseError("expected exactly one state after " + head, lineno);
            if (slot) throw TMParseError("repeated " + head, lineno);
            slot = words[0];
        };
        if (head == "states:") {
            if (!m.states.empty()) throw TMParseError("repeated states:", lineno);
            if (words.empty()) throw TMParseError("empty state list", lineno);
            for (const auto& w : words) {
                if (std::find(m.states.begin(), m.states.end(), w) != m.states.end())
                    throw TMParseError("state '" + w + "' listed twice", lineno);
                m.states.push_back(w);
            }
        } else if (head == "init:") {
            single(init);
        } else if (head == "accept:") {
            single(accept);
        } else if (head == "reject:") {
            single(reject);
        } else if (head == "t:") {
            rows.push_back({lineno, words});
        } else {
            throw TMParseError("unexpected '" + head + "'", lineno);
        }
    }
    if (m.states.empty()) throw TMParseError("missing states:", lineno);
    if (!init) throw TMParseError("missing init:", lineno);
    if (!accept) throw TMParseError("missing accept:", lineno);
    if (!reject) throw TMParseError("missing reject:", lineno);
    auto state = [&](const std::string& s, std::size_t l) {
        try {
            return m.state_index(s);
        } catch (const std::invalid_argument&) {
            throw TMParseError("unknown state '" + s + "'", l);
        }
    };
    m.init = state(*init, lineno);
    m.accept = state(*accept, lineno);
    m.reject = state(*reject, lineno);
    if (m.accept == m.reject) throw TMParseError("accept and reject states coincide", lineno);

    auto one_char = [](const std::string& w, std::string_view allowed, const char* what, std::size_t l) {
        if (w.size() != 1 || allowed.find(w[0]) == std::string_view::npos)
            throw TMParseError(std::string("bad ") + what + " '" + w + "'", l);
        return w[0];
    };
    auto move = [&](const std::string& w, std::size_t l) {
        switch (one_char(w, "LRS", "move", l)) {
        case 'L': return Move::L;
        case 'R': return Move::R;
        default: return Move::S;
        }
    };
    for (const auto& r : rows) {
        const auto& w = r.w;
        if (w.size() != 8 || w[3] != "->") throw TMParseError("transition needs: q in work -> q' write imove wmove", r.line);
        std::size_t q = state(w[0], r.line);
        char ic = one_char(w[1], "01LR", "input character", r.line);
        char wc = one_char(w[2], "01_", "work character", r.line);
        TMAction a{state(w[4], r.line), one_char(w[5], "01_", "work character", r.line), move(w[6], r.line),
                   move(w[7], r.line)};
        if (m.is_final(q)) throw TMParseError("final state '" + w[0] + "' has a transition", r.line);
        if (!m.table.emplace(std::tuple{q, ic, wc}, a).second)
            throw TMParseError("duplicate transition for (" + w[0] + ", " + ic + ", " + wc + ")", r.line);
    }
    return m;
}

inline TMDesc load_tm(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_tm(ss.str());
}

struct TMConfig {
    std::string input;
    std::uint64_t n = 0;  // 0 is the left delimiter, |input|+1 the right one
    std::string left;     // nearest cell first
    char scanned = '_';
    std::string right;    // nearest cell first
    std::size_t state = 0;

    char input_char() const {
        if (n == 0) return 'L';
        if (n > input.size()) return 'R';
        return input[n - 1];
    }
};

inline TMConfig initial_config(const TMDesc& m, const std::string& input) {
    for (char c : input)
        if (c != '0' && c != '1') throw std::invalid_argument("TM input must be over {0,1}");
    TMConfig c;
    c.input = input;
    c.state = m.init;
    return c;
}

// Applies one transition. Moving the input head outwards from a delimiter
// leaves it in place. The work tape grows blanks on demand.
inline bool tm_step(const TMDesc& m, TMConfig& c, std::int64_t* head = nullptr) {
    char ic = c.input_char();
    const TMAction* a = m.find(c.state, ic, c.scanned);
    if (!a) return false;
    c.scanned = a->write;
    if (a->wmove == Move::R) {
        c.left.insert(c.left.begin(), c.scanned);
        c.scanned = c.right.empty() ? '_' : c.right.front();
        if (!c.right.empty()) c.right.erase(c.right.begin());
        if (head) ++*head;
    } else if (a->wmove == Move::L) {
        c.right.insert(c.right.begin(), c.scanned);
        c.scanned = c.left.empty() ? '_' : c.left.front();
        if (!c.left.empty()) c.left.erase(c.left.begin());
        if (head) --*head;
    }
    if (a->imove == Move::R && ic != 'R') ++c.n;
    if (a->imove == Move::L && ic != 'L') --c.n;
    c.state = a->next;
    return true;
}

struct TMResult {
    bool accept;
    std::uint64_t steps;       // T_TM
    std::uint64_t work_cells;  // S_TM
};
struct TMStuck {
    TMConfig config;
    std::uint64_t steps;
};
struct TMOutOfFuel {
    std::uint64_t steps;
};
using TMOutcome = std::variant<TMResult, TMStuck, TMOutOfFuel>;

inline TMOutcome simulate_tm(const TMDesc& m, const std::string& input, std::uint64_t fuel,
                             std::vector<TMConfig>* history = nullptr) {
    TMConfig c = initial_config(m, input);
    std::int64_t head = 0, lo = 0, hi = 0;
    std::uint64_t t = 0;
    if (history) history->push_back(c);
    while (!m.is_final(c.state)) {
        if (t == fuel) return TMOutOfFuel{t};
        if (!tm_step(m, c, &head)) return TMStuck{c, t};
        ++t;
        lo = std::min(lo, head);
        hi = std::max(hi, head);
        if (history) history->push_back(c);
    }
    return TMResult{c.state == m.accept, t, static_cast<std::uint64_t>(hi - lo + 1)};
}

// ---------------------------------------------------------------------------
// compilation to the deterministic λ-calculus

inline const Alphabet& work_alphabet() {
    static const Alphabet a{'0', '1', '_'};
    return a;
}

inline Term encode_input(const std::string& i) { return scott_string(bool_alphabet(), i); }

namespace detail {

inline std::string selector_text(std::size_t count, std::size_t pick, const std::string& stem) {
    std::string s = "(\\";
    for (std::size_t k = 1; k <= count; ++k) s += " " + stem + std::to_string(k);
    return s + ". " + stem + std::to_string(pick) + ")";
}

inline std::string work_char_text(char c) {
    return c == '0' ? "W0" : c == '1' ? "W1" : "WB";
}

inline const std::map<std::string, Term>& tm_defs() {
    static const std::map<std::string, Term> defs = [] {
        Library lib;
        lib.def("W0", "\\w0 w1 wb. w0");
        lib.def("W1", "\\w0 w1 wb. w1");
        lib.def("WB", "\\w0 w1 wb. wb");
        lib.def("EW", "\\x0 x1 xb xe. xe");
        lib.def("OMEGA", "(\\x. x x) (\\x. x x)");
        return lib.defs();
    }();
    return defs;
}

}  // namespace detail

// Source text of the encoding of m. Every helper is bound by a let of the
// form (\g. g V) (\name. B), which puts V before B in the in-order layout.
// The cell builders come first, so the closures making up binary indices
// and work strings point to small left addresses.
inline std::string encode_tm_text(const TMDesc& m) {
    const std::size_t Q = m.states.size();
    auto state = [&](std::size_t q) { return detail::selector_text(Q, q + 1, "q"); };
    std::string s;
    std::size_t lets = 0;
    auto let = [&](const std::string& name, const std::string& value) {
        s += "(\\g. g (" + value + ")) (\\" + name + ".\n";
        ++lets;
    };

    let("cons1", arith_text::cons1);
    let("wcons", "\\k r. k (\\x0 x1 xb xe. x0 r) (\\x0 x1 xb xe. x1 r) (\\x0 x1 xb xe. xb r)");
    let("revapp", arith_text::revapp);
    let("succ", arith_text::succ);
    let("pred", arith_text::pred);
    let("walk", arith_text::walk);
    let("add", arith_text::add);
    let("readn", arith_text::readn);
    // pop the nearest cell of a work string: k receives the character and the rest
    let("pop", "\\s k. s (\\r k. k W0 r) (\\r k. k W1 r) (\\r k. k WB r) (\\k. k WB EW) k");

    // Selectors are applied to closed branches and the configuration is
    // passed after them, so that only the chosen branch ever sees it.
    auto leaf = [&](std::size_t q, char ic, char wc) -> std::string {
        const TMAction* a = m.find(q, ic, wc);
        if (!a) return "\\i n sl sr t k. OMEGA";
        std::string body = "t k (\\x. x i n2 sl2 a2 sr2 " + state(a->next) + ")";
        std::string w = detail::work_char_text(a->write);
        std::string pick = a->write == '0' ? "x" : a->write == '1' ? "y" : "z";
        switch (a->wmove) {
        case Move::S:
            body = "(\\sl2 a2 sr2. " + body + ") sl " + w + " sr";
            break;
        case Move::R:
            body = "wcons (\\x y z. pop sr (\\a2 sr2. (\\sl2. " + body + ") " + pick + ")) sl";
            break;
        case Move::L:
            body = "wcons (\\x y z. pop sl (\\a2 sl2. (\\sr2. " + body + ") " + pick + ")) sr";
            break;
        }
        bool moves = (a->imove == Move::R && ic != 'R') || (a->imove == Move::L && ic != 'L');
        if (!moves) body = "(\\n2. " + body + ") n";
        else if (a->imove == Move::R) body = "succ n (\\n2. " + body + ")";
        else body = "pred n (\\o. o (\\n2. " + body + ") I)";
        return "\\i n sl sr t k. " + body;
    };

    std::string dispatch;
    for (std::size_t q = 0; q < Q; ++q) {
        std::string d;
        if (m.is_final(q)) {
            d = "\\i n sl a sr t k. k (\\x. x i n sl a sr " + state(q) + ")";
        } else {
            d = "\\i n sl a sr t k. readn i n (\\c n. c";
            for (char ic : tm_input_chars) {
                d += "\n        (\\i n sl a sr t k. a";
                for (char wc : tm_work_chars) d += "\n          (" + leaf(q, ic, wc) + ")";
                d += "\n          i n sl sr t k)";
            }
            d += "\n        i n sl a sr t k)";
        }
        dispatch += "\n      (" + d + ")";
    }
    let("trans", "\\k C. FIXD (\\t k C. C (\\i n sl a sr q. q" + dispatch + "\n      i n sl a sr t k)) k C");

    std::string finals;
    for (std::size_t q = 0; q < Q; ++q) finals += q == m.accept ? " (\\k. k TRUE)" : " (\\k. k FALSE)";
    let("final", "\\k C. C (\\i n sl a sr q. q" + finals + " k)");
    let("init", "\\k i. k (\\x. x i BZERO EW WB EW " + state(m.init) + ")");

    s += "\\i. init (\\C. trans (\\C2. final I C2) C) i";
    s += std::string(lets, ')');
    // Prologue: cons0 r k passes the 0-cell with tail r to k. Its body calls
    // the let-bound g, which makes the 0-cell template the 7th constructor of
    // the program: most cells of an index are 0-cells.
    return "(\\g. g (\\r. g (\\x0 x1 xe. x0 r)))\n"
           "  (\\a k. k a)\n"
           "  (\\cons0.\n" + s + ")";
}

inline Term encode_tm(const TMDesc& m) { return parse(encode_tm_text(m), &detail::tm_defs()); }

inline Term encode_run(const TMDesc& m, const std::string& input) { return app(encode_tm(m), encode_input(input)); }

// The configuration as the encoded run denotes it at trans iterations. The
// head index is given as a bit string since the arithmetic combinators may
// leave non-canonical numerals (high zero bits).
inline Term config_tuple(const TMDesc& m, const TMConfig& c, const std::string& index_bits) {
    const auto& W = work_alphabet();
    Term sel = scott_char(W, alphabet_index(W, c.scanned));
    Term q = parse(detail::selector_text(m.states.size(), c.state + 1, "q"));
    Term body = var(1);
    for (const Term& t : {encode_input(c.input), scott_string(bool_alphabet(), index_bits), scott_string(W, c.left),
                          sel, scott_string(W, c.right), q})
        body = app(body, t);
    return lam(body, "x");
}

inline Term config_tuple(const TMDesc& m, const TMConfig& c) { return config_tuple(m, c, to_binary(c.n)); }

// Does a decoded configuration tuple denote c? Indices compare by value.
inline bool config_matches(const TMDesc& m, const Term& t, const TMConfig& c) {
    std::vector<Term> parts;
    if (t->kind != Kind::Lam) return false;
    const TermNode* cur = t->a.get();
    while (cur->kind == Kind::App) {
        parts.push_back(cur->b);
        cur = cur->a.get();
    }
    if (cur->kind != Kind::Var || cur->index != 1 || parts.size() != 6) return false;
    std::reverse(parts.begin(), parts.end());
    std::string bits;
    try {
        bits = read_scott_string(parts[1], bool_alphabet());
    } catch (const std::invalid_argument&) {
        return false;
    }
    if (from_binary(bits) != c.n) return false;
    return term_equal(t, config_tuple(m, c, bits));
}

// Locates the body of trans's fix-point argument: the code is at this node
// exactly when a new iteration starts, with C bound to the configuration.
struct TransMarker {
    NodeId body = no_node;
    NodeId config_binder = no_node;
};

inline TransMarker find_trans_marker(const Code& code) {
    // the application C (...) directly under the binders t k C
    for (NodeId id = 0; id < code.size(); ++id) {
        const auto& n = code[id];
        if (n.kind != Kind::App) continue;
        const auto& l = code[n.left];
        if (l.kind != Kind::Var || l.index != 1 || l.binder == no_node) continue;
        if (code[l.binder].term->name != "C") continue;
        NodeId p = l.binder;  // λC
        if (code[p].parent == no_node || code[code[p].parent].term->name != "k") continue;
        NodeId p2 = code[p].parent;
        if (code[p2].parent == no_node || code[code[p2].parent].term->name != "t") continue;
        if (code[p].left != id) continue;
        return {id, l.binder};
    }
    throw std::logic_error("trans iteration body not found");
}

}  // namespace lamspace
