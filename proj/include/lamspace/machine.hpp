#pragma once

#include <array>
#include <functional>
#include <string_view>

#include "code.hpp"

namespace lamspace {

struct InvariantViolation : std::logic_error {
    using std::logic_error::logic_error;
};

enum class Transition : std::uint8_t { Sea, SeaV, SeaNV, Beta, BetaW, BetaNW, Sub, Ret };
inline constexpr std::size_t transition_kinds = 8;

inline std::string_view transition_name(Transition k) {
    static constexpr std::array<std::string_view, transition_kinds> names{
        "sea", "sea_v", "sea_nv", "beta", "beta_w", "beta_nw", "sub", "ret"};
    return names[static_cast<std::size_t>(k)];
}

inline bool is_beta(Transition k) {
    return k == Transition::Beta || k == Transition::BetaW || k == Transition::BetaNW;
}

// ---------------------------------------------------------------------------
// closures and environments

struct Closure;
using ClosurePtr = std::shared_ptr<const Closure>;

struct EnvEntry {
    NodeId binder;  // the abstraction of t0 that bound the variable
    ClosurePtr value;
};

// Naive KAM: most recent entry first. Space KAM / LAM: sorted by binder.
using Env = std::vector<EnvEntry>;

// Sizes are cached: `bits` is |(u,e)| under the machine's size model and
// `count` the number of closures in the tree rooted here (itself included).
// Structure is shared in memory but always accounted as if copied.
struct Closure {
    NodeId code;
    Env env;
    std::uint64_t bits;
    std::uint64_t count;
};

enum class SizeRule : std::uint8_t { UniformLog, LeftAddress };

struct SizeModel {
    const Code* code;
    SizeRule rule;

    std::uint64_t code_bits(NodeId id) const {
        return rule == SizeRule::UniformLog ? code->uniform_log_bits() : code->left_address_bits(id);
    }
    // entries |x| + |c|, with |x| the binder distance of x seen from `at`
    std::uint64_t env_bits(NodeId at, const Env& e) const {
        std::uint64_t s = 0;
        for (const auto& en : e) s += bits(code->distance(at, en.binder)) + en.value->bits;
        return s;
    }
    static std::uint64_t env_count(const Env& e) {
        std::uint64_t s = 0;
        for (const auto& en : e) s += en.value->count;
        return s;
    }
    ClosurePtr make(NodeId at, Env e) const {
        auto b = code_bits(at) + env_bits(at, e);
        auto c = 1 + env_count(e);
        return std::make_shared<const Closure>(Closure{at, std::move(e), b, c});
    }
};

inline const EnvEntry* env_lookup(const Env& e, NodeId binder) {
    for (const auto& en : e)
        if (en.binder == binder) return &en;
    return nullptr;
}

inline const EnvEntry* env_lookup_sorted(const Env& e, NodeId binder) {
    auto it = std::lower_bound(e.begin(), e.end(), binder, [](const EnvEntry& en, NodeId b) { return en.binder < b; });
    return it != e.end() && it->binder == binder ? &*it : nullptr;
}

// e|vars for a sorted env; every variable must be present
inline Env env_restrict(const Env& e, const std::vector<NodeId>& vars) {
    Env out;
    out.reserve(vars.size());
    auto it = e.begin();
    for (NodeId v : vars) {
        while (it != e.end() && it->binder < v) ++it;
        if (it == e.end() || it->binder != v)
            throw InvariantViolation("environment restriction: variable missing from environment");
        out.push_back(*it);
    }
    return out;
}

inline bool env_domain_is(const Env& e, const std::vector<NodeId>& vars) {
    if (e.size() != vars.size()) return false;
    for (std::size_t k = 0; k < e.size(); ++k)
        if (e[k].binder != vars[k]) return false;
    return true;
}

struct Stack {
    std::vector<ClosurePtr> items;  // top at back
    std::uint64_t bits = 0;
    std::uint64_t count = 0;

    bool empty() const { return items.empty(); }
    std::size_t size() const { return items.size(); }
    void push(ClosurePtr c) {
        bits += c->bits;
        count += c->count;
        items.push_back(std::move(c));
    }
    ClosurePtr pop() {
        ClosurePtr c = std::move(items.back());
        items.pop_back();
        bits -= c->bits;
        count -= c->count;
        return c;
    }
    const ClosurePtr& top() const { return items.back(); }
};

// (code, env, stack): shared by the Naive and the Space KAM
struct KamState {
    NodeId code;
    Env env;
    Stack stack;
};

// ---------------------------------------------------------------------------
// decoding closures back to terms

// Replaces the free variables of the code at a closure by the decoding of
// the closures they are bound to. Closures denote closed terms, so no
// index shifting is ever needed; results are memoised per closure.
class Decoder {
public:
    explicit Decoder(const Code& code) : code_(code) {}

    Term closure(const ClosurePtr& c) {
        if (auto it = memo_.find(c.get()); it != memo_.end()) return it->second;
        Term t = at(c->code, c->env);
        memo_.emplace(c.get(), t);
        keep_.push_back(c);
        return t;
    }

    Term at(NodeId id, const Env& env) { return go(id, id, env); }

private:
    Term go(NodeId root, NodeId id, const Env& env) {
        const auto& n = code_[id];
        if (n.fv.empty()) return n.term;
        switch (n.kind) {
        case Kind::Var: {
            if (code_.contains(root, n.binder)) return n.term;
            const EnvEntry* en = env_lookup(env, n.binder);
            if (!en) throw InvariantViolation("decode: unbound variable in closure");
            return closure(en->value);
        }
        case Kind::Lam: {
            Term b = go(root, n.left, env);
            return b == code_[n.left].term ? n.term : lam(b, n.term->name);
        }
        case Kind::App: {
            Term l = go(root, n.left, env);
            Term r = go(root, n.right, env);
            return (l == code_[n.left].term && r == code_[n.right].term) ? n.term : app(l, r);
        }
        }
        return nullptr;
    }

    const Code& code_;
    std::unordered_map<const Closure*, Term> memo_;
    std::vector<ClosurePtr> keep_;
};

inline Term decode_kam(const Code& code, const KamState& s) {
    Decoder d(code);
    Term t = d.at(s.code, s.env);
    for (std::size_t k = s.stack.items.size(); k-- > 0;) t = app(t, d.closure(s.stack.items[k]));
    return t;
}

inline Term decode_closure(const Code& code, const ClosurePtr& c) {
    Decoder d(code);
    return d.closure(c);
}

// ---------------------------------------------------------------------------
// profiles and the run driver

struct TraceLine {
    std::uint64_t step;
    Transition kind;
    std::uint64_t bit_space;
    std::uint64_t abstract_space;
    std::uint64_t heap_cells;
};

struct RunProfile {
    std::string machine;
    std::array<std::uint64_t, transition_kinds> counts{};
    std::uint64_t beta_steps = 0;
    std::uint64_t transitions = 0;
    std::uint64_t max_bit_space = 0;
    std::uint64_t max_abstract_space = 0;
    std::uint64_t max_heap_cells = 0;
    bool has_abstract_space = true;
    bool completed = false;
    std::optional<Term> result;  // decoded final state, when completed
    std::vector<TraceLine> trace;

    std::uint64_t count(Transition k) const { return counts[static_cast<std::size_t>(k)]; }
};

struct RunOptions {
    bool trace = false;
    bool decode = true;
};

template <class M>
struct RunOutcome {
    RunProfile profile;
    typename M::State state;
};

template <class M>
using Observer = std::function<void(const typename M::State&, std::optional<Transition>)>;

// Iterates the step function until a final state or `fuel` transitions.
// Space is sampled on the initial state and after every transition.
template <class M>
RunOutcome<M> drive(const M& m, typename M::State s, std::uint64_t fuel, const RunOptions& opt = {},
                    const Observer<M>& observe = {}) {
    RunProfile p;
    p.machine = std::string(M::name);
    p.has_abstract_space = M::has_abstract_space;
    auto sample = [&](std::optional<Transition> k) {
        std::uint64_t b = m.bit_size(s);
        std::uint64_t a = M::has_abstract_space ? m.abstract_space(s) : 0;
        std::uint64_t h = m.heap_cells(s);
        p.max_bit_space = std::max(p.max_bit_space, b);
        p.max_abstract_space = std::max(p.max_abstract_space, a);
        p.max_heap_cells = std::max(p.max_heap_cells, h);
        if (opt.trace && k) p.trace.push_back({p.transitions, *k, b, a, h});
        if (observe) observe(s, k);
    };
    sample(std::nullopt);
    while (true) {
        if (m.is_final(s)) {
            p.completed = true;
            break;
        }
        if (p.transitions == fuel) break;
        Transition k = m.step(s);
        ++p.transitions;
        ++p.counts[static_cast<std::size_t>(k)];
        if (is_beta(k)) ++p.beta_steps;
        sample(k);
    }
    if (p.completed && opt.decode) p.result = m.decode(s);
    return {std::move(p), std::move(s)};
}

}  // namespace lamspace
