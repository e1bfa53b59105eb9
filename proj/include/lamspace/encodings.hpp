#pragma once

#include "term.hpp"

namespace lamspace {

// ---------------------------------------------------------------------------
// Scott encodings

using Alphabet = std::vector<char>;

inline const Alphabet& bool_alphabet() {
    static const Alphabet a{'0', '1'};
    return a;
}

inline std::size_t alphabet_index(const Alphabet& sigma, char c) {
    for (std::size_t k = 0; k < sigma.size(); ++k)
        if (sigma[k] == c) return k + 1;
    throw std::invalid_argument(std::string("character '") + c + "' is not in the alphabet");
}

inline Term scott_char(const Alphabet& sigma, std::size_t i) {
    if (sigma.empty() || i < 1 || i > sigma.size()) throw std::out_of_range("character index out of range");
    std::uint32_t n = static_cast<std::uint32_t>(sigma.size());
    Term t = var(n - static_cast<std::uint32_t>(i) + 1);
    for (std::uint32_t k = n; k >= 1; --k) t = lam(t, std::string("x") + sigma[k - 1]);
    return t;
}

// λx1..λxn.λxε. x_i ⌜r⌝, built from the end of the string
inline Term scott_string(const Alphabet& sigma, const std::string& s) {
    std::uint32_t n = static_cast<std::uint32_t>(sigma.size());
    auto wrap = [&](Term body) {
        body = lam(body, "xe");
        for (std::uint32_t k = n; k >= 1; --k) body = lam(body, std::string("x") + sigma[k - 1]);
        return body;
    };
    Term t = wrap(var(1));
    for (std::size_t p = s.size(); p-- > 0;) {
        std::uint32_t i = static_cast<std::uint32_t>(alphabet_index(sigma, s[p]));
        t = wrap(app(var(n + 2 - i), t));
    }
    return t;
}

inline std::string read_scott_string(const Term& t, const Alphabet& sigma) {
    std::uint32_t n = static_cast<std::uint32_t>(sigma.size());
    std::string out;
    const TermNode* cur = t.get();
    while (true) {
        for (std::uint32_t k = 0; k <= n; ++k) {
            if (cur->kind != Kind::Lam) throw std::invalid_argument("not a Scott string: missing binder");
            cur = cur->a.get();
        }
        if (cur->kind == Kind::Var) {
            if (cur->index != 1) throw std::invalid_argument("not a Scott string: bad end marker");
            return out;
        }
        if (cur->kind != Kind::App || cur->a->kind != Kind::Var)
            throw std::invalid_argument("not a Scott string: bad cell body");
        std::uint32_t v = cur->a->index;
        if (v < 2 || v > n + 1) throw std::invalid_argument("not a Scott string: bad character variable");
        out += sigma[n + 1 - v];
        cur = cur->b.get();
    }
}

// little-endian binary numerals over {0,1}; zero is "0"
inline std::string to_binary(std::uint64_t n) {
    if (n == 0) return "0";
    std::string s;
    for (; n; n >>= 1) s += (n & 1) ? '1' : '0';
    return s;
}

inline std::uint64_t from_binary(const std::string& s) {
    std::uint64_t v = 0;
    for (std::size_t k = s.size(); k-- > 0;) v = v * 2 + (s[k] == '1' ? 1 : 0);
    return v;
}

// ---------------------------------------------------------------------------
// named combinators, written as text over earlier definitions

// Binary arithmetic and the input reader, in continuation-passing style.
// The texts are shared with the TM compiler, which binds the cell builders
// to its own copies. Only the chosen cell is ever built, so a tail is never
// captured twice.
namespace arith_text {
inline constexpr const char* cons0 = "\\r k. k (\\x0 x1 xe. x0 r)";
inline constexpr const char* cons1 = "\\r k. k (\\x0 x1 xe. x1 r)";
// revapp a m k: k receives the reverse of a in front of m
inline constexpr const char* revapp =
    "\\a m k. FIXD (\\p a m k. a (\\r m k. cons0 m (\\m2. p r m2 k)) (\\r m k. cons1 m (\\m2. p r m2 k))"
    " (\\m k. k m) m k) a m k";
// the low bits that change are collected in an accumulator and put back in front at the end
inline constexpr const char* succ =
    "\\n k. FIXD (\\f n a k. n (\\r a k. cons1 r (\\r2. revapp a r2 k)) (\\r a k. cons0 a (\\a2. f r a2 k))"
    " (\\a k. cons1 BEMPTY (\\r2. revapp a r2 k)) a k) n BEMPTY k";
// k receives an option: (\s z. s m) with m = n-1, or (\s z. z) when n is zero
inline constexpr const char* pred =
    "\\n k. FIXD (\\f n a k. n (\\r a k. cons1 a (\\a2. f r a2 k))"
    " (\\r a k. cons0 r (\\r2. revapp a r2 (\\m. k (\\s z. s m))))"
    " (\\a k. k (\\s z. z)) a k) n BEMPTY k";
// walk x y k: drop characters of x and y together until y is empty, then
// pass what is left of x; the empty string if x runs out first
inline constexpr const char* walk =
    "\\x y k. FIXD (\\w x y k. y"
    " (\\ry x k. x (\\rx ry k. w rx ry k) (\\rx ry k. w rx ry k) (\\ry k. k BEMPTY) ry k)"
    " (\\ry x k. x (\\rx ry k. w rx ry k) (\\rx ry k. w rx ry k) (\\ry k. k BEMPTY) ry k)"
    " (\\x k. k x) x k) x y k";
// Positions in a string s are its suffixes. With z = s, add z p r k passes
// the suffix at position p + r, where r is a nonzero position; the empty
// string stands for every position past the end.
inline constexpr const char* add =
    "\\z p r k. r (\\q r z p k. walk z r (\\m. walk p m k)) (\\q r z p k. walk z r (\\m. walk p m k))"
    " (\\r z p k. k BEMPTY) r z p k";
// readn i n k: k receives the selector of the character at index n of the
// input i and n itself. n is taken apart from its low bit and rebuilt on the
// way, while a position doubles at every bit; positions are counted in the
// string z = 0 i, whose position n holds the character of index n.
inline constexpr const char* readn =
    "\\i n k. cons0 i (\\z. FIXD (\\g s a p r f k. s"
    " (\\s a p r f k. cons0 a (\\a2. add z r r (\\r2. g s a2 p r2 f k)))"
    " (\\s a p r f k. cons1 a (\\a2. add z p r (\\p2. add z r r (\\r2. g s a2 p2 r2 TRUE k))))"
    " (\\a p r f k. revapp a BEMPTY (\\n2. f"
    " (\\p k n2. p (\\x k n2. k CI0 n2) (\\x k n2. k CI1 n2) (\\k n2. k CIR n2) k n2)"
    " (\\p k n2. k CIL n2) p k n2))"
    " a p r f k) n BEMPTY z i FALSE k)";
inline constexpr const char* read = "\\i n k. readn i n (\\c m. k c)";
}  // namespace arith_text

class Library {
public:
    Library() {
        def("I", "\\x. x");
        def("TRUE", "\\x y. x");
        def("FALSE", "\\x y. y");
        def("THETA", "\\x y. y (x x y)");
        def("FIX", "THETA THETA");
        // same fix-point with the recursive argument eta-expanded, so that
        // every application argument is a variable or an abstraction
        def("THETAD", "\\x y. y (\\z. x x y z)");
        def("FIXD", "THETAD THETAD");

        // binary strings: binders x0 x1 xe
        def("BEMPTY", "\\x0 x1 xe. xe");
        def("BZERO", "\\x0 x1 xe. x0 BEMPTY");
        def("BONE", "\\x0 x1 xe. x1 BEMPTY");

        def("ISZERO", "FIXD (\\f n. n f (\\r. FALSE) TRUE)");

        // input characters over {0,1,L,R}
        def("CI0", "\\c0 c1 cl cr. c0");
        def("CI1", "\\c0 c1 cl cr. c1");
        def("CIL", "\\c0 c1 cl cr. cl");
        def("CIR", "\\c0 c1 cl cr. cr");

        def("cons0", arith_text::cons0);
        def("cons1", arith_text::cons1);
        def("revapp", arith_text::revapp);
        def("succ", arith_text::succ);
        def("pred", arith_text::pred);
        def("walk", arith_text::walk);
        def("add", arith_text::add);
        def("readn", arith_text::readn);
        def("read", arith_text::read);
        def("BIN_SUCC", "\\n. succ n I");
        def("BIN_PRED", "\\n. pred n (\\o. o I BEMPTY)");

        // scrolling programs
        def("TOY", "FIX (\\f z. z f f I)");
        def("GLCPY", "\\z. FIX (\\f s. s f f z) z");
        def("REVAPP", "FIXD (\\g z a. z (\\r a2. g r (\\x0 x1 xe. x0 a2))"
                      "                (\\r a2. g r (\\x0 x1 xe. x1 a2))"
                      "                (\\a2. a2) a)");
        def("LOCPY", "\\s. FIXD (\\f z a. z (\\r a2. f r (\\x0 x1 xe. x0 a2))"
                     "                   (\\r a2. f r (\\x0 x1 xe. x1 a2))"
                     "                   (\\a2. REVAPP a2 BEMPTY) a) s BEMPTY");
    }

    const Term& get(const std::string& name) const {
        auto it = defs_.find(name);
        if (it == defs_.end()) throw std::out_of_range("no combinator named " + name);
        return it->second;
    }
    Term parse(const std::string& text) const { return lamspace::parse(text, &defs_); }
    const std::map<std::string, Term>& defs() const { return defs_; }

    void def(const std::string& name, const std::string& text) {
        Term t = lamspace::parse(text, &defs_);
        if (!is_closed(t)) throw std::logic_error("combinator " + name + " is not closed");
        defs_[name] = t;
    }

private:
    std::map<std::string, Term> defs_;
};

inline const Library& library() {
    static const Library lib;
    return lib;
}

inline Term theta() { return library().get("THETA"); }
inline Term fix_combinator() { return library().get("FIX"); }
inline Term identity() { return library().get("I"); }
inline Term church_true() { return library().get("TRUE"); }
inline Term church_false() { return library().get("FALSE"); }

enum class ScrollerKind : std::uint8_t { Toy, LoCpy, GlCpy };

inline Term scroller(ScrollerKind k) {
    switch (k) {
    case ScrollerKind::Toy: return library().get("TOY");
    case ScrollerKind::LoCpy: return library().get("LOCPY");
    case ScrollerKind::GlCpy: return library().get("GLCPY");
    }
    throw std::invalid_argument("unknown scroller");
}

struct BinArith {
    Term succ, pred, iszero;
};

inline BinArith bin_arith() {
    return {library().get("BIN_SUCC"), library().get("BIN_PRED"), library().get("ISZERO")};
}

inline Term input_reader() { return library().get("read"); }

// the selector the reader should produce for index n of input i
inline Term input_selector(const std::string& i, std::uint64_t n) {
    if (n == 0) return library().get("CIL");
    if (n > i.size()) return library().get("CIR");
    return library().get(i[n - 1] == '0' ? "CI0" : "CI1");
}

}  // namespace lamspace
