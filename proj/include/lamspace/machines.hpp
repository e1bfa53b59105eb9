#pragma once

#include "machine.hpp"

namespace lamspace {

// ---------------------------------------------------------------------------
// Naive KAM

class NaiveKam {
public:
    using State = KamState;
    static constexpr std::string_view name = "naive";
    static constexpr bool has_abstract_space = true;

    explicit NaiveKam(CodePtr code) : code_(std::move(code)), model_{code_.get(), SizeRule::UniformLog} {}

    const Code& code() const { return *code_; }
    const SizeModel& model() const { return model_; }
    State initial() const { return {code_->root(), {}, {}}; }

    bool is_final(const State& s) const { return (*code_)[s.code].kind == Kind::Lam && s.stack.empty(); }

    Transition step(State& s) const {
        const auto& n = (*code_)[s.code];
        switch (n.kind) {
        case Kind::App:
            s.stack.push(model_.make(n.right, s.env));
            s.code = n.left;
            return Transition::Sea;
        case Kind::Lam: {
            if (s.stack.empty()) throw InvariantViolation("naive: step on a final state");
            Env e;
            e.reserve(s.env.size() + 1);
            e.push_back({s.code, s.stack.pop()});
            e.insert(e.end(), s.env.begin(), s.env.end());
            s.env = std::move(e);
            s.code = n.left;
            return Transition::Beta;
        }
        case Kind::Var: {
            const EnvEntry* en = env_lookup(s.env, n.binder);
            if (!en) throw InvariantViolation("naive: unbound variable");
            ClosurePtr c = en->value;
            s.code = c->code;
            s.env = c->env;
            return Transition::Sub;
        }
        }
        throw InvariantViolation("naive: bad node");
    }

    std::uint64_t bit_size(const State& s) const {
        return model_.code_bits(s.code) + model_.env_bits(s.code, s.env) + s.stack.bits;
    }
    std::uint64_t abstract_space(const State& s) const {
        return 1 + SizeModel::env_count(s.env) + s.stack.count;
    }
    std::uint64_t heap_cells(const State&) const { return 0; }
    Term decode(const State& s) const { return decode_kam(*code_, s); }

private:
    CodePtr code_;
    SizeModel model_;
};

// ---------------------------------------------------------------------------
// Space KAM

class SpaceKam {
public:
    using State = KamState;
    static constexpr std::string_view name = "space";
    static constexpr bool has_abstract_space = true;

    explicit SpaceKam(CodePtr code) : code_(std::move(code)), model_{code_.get(), SizeRule::LeftAddress} {}

    const Code& code() const { return *code_; }
    const SizeModel& model() const { return model_; }
    State initial() const { return {code_->root(), {}, {}}; }

    // a closure is only built once its environment is exactly fv(code)
    ClosurePtr make(NodeId at, Env e) const {
        if (!env_domain_is(e, (*code_)[at].fv)) throw InvariantViolation("space: dom e differs from fv(t)");
        return model_.make(at, std::move(e));
    }

    bool is_final(const State& s) const { return (*code_)[s.code].kind == Kind::Lam && s.stack.empty(); }

    Transition step(State& s) const {
        const auto& n = (*code_)[s.code];
        switch (n.kind) {
        case Kind::App: {
            const auto& r = (*code_)[n.right];
            Transition k;
            if (r.kind == Kind::Var) {
                const EnvEntry* en = env_lookup_sorted(s.env, r.binder);
                if (!en) throw InvariantViolation("space: unbound variable");
                s.stack.push(en->value);
                k = Transition::SeaV;
            } else {
                s.stack.push(make(n.right, env_restrict(s.env, r.fv)));
                k = Transition::SeaNV;
            }
            s.env = env_restrict(s.env, (*code_)[n.left].fv);
            s.code = n.left;
            check(s);
            return k;
        }
        case Kind::Lam: {
            if (s.stack.empty()) throw InvariantViolation("space: step on a final state");
            ClosurePtr c = s.stack.pop();
            s.code = n.left;
            if (!n.binder_used) {
                check(s);
                return Transition::BetaW;
            }
            NodeId x = static_cast<NodeId>(&n - &(*code_)[0]);
            auto it = std::lower_bound(s.env.begin(), s.env.end(), x,
                                       [](const EnvEntry& en, NodeId b) { return en.binder < b; });
            s.env.insert(it, EnvEntry{x, std::move(c)});
            check(s);
            return Transition::BetaNW;
        }
        case Kind::Var: {
            if (s.env.size() != 1 || s.env[0].binder != n.binder)
                throw InvariantViolation("space: sub on a non-singleton environment");
            ClosurePtr c = s.env[0].value;
            s.code = c->code;
            s.env = c->env;
            return Transition::Sub;
        }
        }
        throw InvariantViolation("space: bad node");
    }

    void check(const State& s) const {
        if (!env_domain_is(s.env, (*code_)[s.code].fv)) throw InvariantViolation("space: dom e differs from fv(t)");
    }

    std::uint64_t bit_size(const State& s) const {
        return model_.code_bits(s.code) + model_.env_bits(s.code, s.env) + s.stack.bits;
    }
    std::uint64_t abstract_space(const State& s) const {
        return 1 + SizeModel::env_count(s.env) + s.stack.count;
    }
    std::uint64_t heap_cells(const State&) const { return 0; }
    Term decode(const State& s) const { return decode_kam(*code_, s); }

private:
    CodePtr code_;
    SizeModel model_;
};

// ---------------------------------------------------------------------------
// Time KAM: environments and stacks live in a heap that only grows

struct HeapCell {
    enum class Kind : std::uint8_t { Stack, Env } kind;
    NodeId code;          // the closure's code
    std::uint32_t env;    // the closure's environment address
    std::uint32_t next;   // next stack cell / next env cell (0 = empty)
};

struct TimeState {
    NodeId code;
    std::uint32_t env = 0;
    std::uint32_t stack = 0;
    std::vector<HeapCell> heap{HeapCell{HeapCell::Kind::Env, no_node, 0, 0}};  // address 0 is the empty structure
    std::uint64_t stack_cells = 0;
    std::uint64_t env_cells = 0;

    std::uint64_t cells() const { return heap.size() - 1; }
};

class TimeKam {
public:
    using State = TimeState;
    static constexpr std::string_view name = "time";
    static constexpr bool has_abstract_space = false;

    explicit TimeKam(CodePtr code) : code_(std::move(code)) {}

    const Code& code() const { return *code_; }
    State initial() const {
        State s;
        s.code = code_->root();
        return s;
    }

    bool is_final(const State& s) const { return (*code_)[s.code].kind == Kind::Lam && s.stack == 0; }

    // the closure bound to de Bruijn index k in the chain starting at env
    const HeapCell& lookup(const State& s, std::uint32_t env, std::uint32_t k) const {
        std::uint32_t a = env;
        for (std::uint32_t j = 1; j < k; ++j) {
            if (a == 0) break;
            a = s.heap.at(a).next;
        }
        if (a == 0 || a >= s.heap.size() || s.heap[a].kind != HeapCell::Kind::Env)
            throw InvariantViolation("time: dangling environment address");
        return s.heap[a];
    }

    Transition step(State& s) const {
        const auto& n = (*code_)[s.code];
        switch (n.kind) {
        case Kind::App: {
            const auto& r = (*code_)[n.right];
            HeapCell cell{HeapCell::Kind::Stack, n.right, s.env, s.stack};
            Transition k = Transition::SeaNV;
            if (r.kind == Kind::Var) {
                const HeapCell& b = lookup(s, s.env, r.index);
                cell.code = b.code;
                cell.env = b.env;
                k = Transition::SeaV;
            }
            s.heap.push_back(cell);
            ++s.stack_cells;
            s.stack = static_cast<std::uint32_t>(s.heap.size() - 1);
            s.code = n.left;
            return k;
        }
        case Kind::Lam: {
            if (s.stack == 0) throw InvariantViolation("time: step on a final state");
            HeapCell top = s.heap.at(s.stack);
            if (top.kind != HeapCell::Kind::Stack) throw InvariantViolation("time: dangling stack address");
            s.stack = top.next;
            s.heap.push_back(HeapCell{HeapCell::Kind::Env, top.code, top.env, s.env});
            ++s.env_cells;
            s.env = static_cast<std::uint32_t>(s.heap.size() - 1);
            s.code = n.left;
            return Transition::Beta;
        }
        case Kind::Var: {
            const HeapCell& b = lookup(s, s.env, n.index);
            s.code = b.code;
            s.env = b.env;
            return Transition::Sub;
        }
        }
        throw InvariantViolation("time: bad node");
    }

    // |u| = log|t0|, pointers = bits(cells allocated so far), |x| = 1 since an
    // env cell's variable is the innermost binder of its own chain
    std::uint64_t bit_size(const State& s) const {
        std::uint64_t cb = code_->uniform_log_bits();
        std::uint64_t ab = bits(s.cells());
        std::uint64_t closure = cb + ab;
        std::uint64_t heap = s.stack_cells * (closure + ab) + s.env_cells * (1 + closure + ab);
        return cb + ab + ab + heap;
    }
    std::uint64_t abstract_space(const State&) const {
        throw InvariantViolation("abstract space is not defined for Time KAM states");
    }
    std::uint64_t heap_cells(const State& s) const { return s.cells(); }

    Term decode_closure(const State& s, NodeId code, std::uint32_t env) const {
        std::map<std::pair<NodeId, std::uint32_t>, Term> memo;
        return decode_at(s, code, env, memo);
    }

    Term decode(const State& s) const {
        std::map<std::pair<NodeId, std::uint32_t>, Term> memo;
        Term t = decode_at(s, s.code, s.env, memo);
        for (std::uint32_t a = s.stack; a != 0; a = s.heap.at(a).next)
            t = app(t, decode_at(s, s.heap[a].code, s.heap[a].env, memo));
        return t;
    }

private:
    Term decode_at(const State& s, NodeId code, std::uint32_t env,
                   std::map<std::pair<NodeId, std::uint32_t>, Term>& memo) const {
        auto key = std::make_pair(code, env);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        auto go = [&](auto&& self, NodeId id, std::uint32_t depth) -> Term {
            const auto& n = (*code_)[id];
            if (n.fv.empty()) return n.term;
            switch (n.kind) {
            case Kind::Var: {
                if (n.index <= depth) return n.term;
                const HeapCell& b = lookup(s, env, n.index - depth);
                return decode_at(s, b.code, b.env, memo);
            }
            case Kind::Lam: {
                Term b = self(self, n.left, depth + 1);
                return b == (*code_)[n.left].term ? n.term : lam(b, n.term->name);
            }
            case Kind::App: {
                Term l = self(self, n.left, depth);
                Term r = self(self, n.right, depth);
                return (l == (*code_)[n.left].term && r == (*code_)[n.right].term) ? n.term : app(l, r);
            }
            }
            return nullptr;
        };
        Term t = go(go, code, 0);
        memo.emplace(key, t);
        return t;
    }

    CodePtr code_;
};

// ---------------------------------------------------------------------------
// Space LAM: right-to-left call-by-value with a dump

struct DumpEntry {
    ClosurePtr fn;  // the function part waiting for its argument's value
    Stack stack;
};

struct LamState {
    std::vector<DumpEntry> dump;  // innermost last
    std::uint64_t dump_bits = 0;
    std::uint64_t dump_count = 0;
    NodeId code;
    Env env;
    Stack stack;
};

class SpaceLam {
public:
    using State = LamState;
    static constexpr std::string_view name = "lam";
    static constexpr bool has_abstract_space = true;

    explicit SpaceLam(CodePtr code) : code_(std::move(code)), model_{code_.get(), SizeRule::LeftAddress} {}

    const Code& code() const { return *code_; }
    const SizeModel& model() const { return model_; }
    State initial() const {
        State s;
        s.code = code_->root();
        return s;
    }

    ClosurePtr make(NodeId at, Env e) const {
        if (!env_domain_is(e, (*code_)[at].fv)) throw InvariantViolation("lam: dom e differs from fv(t)");
        return model_.make(at, std::move(e));
    }

    bool is_final(const State& s) const {
        return s.dump.empty() && (*code_)[s.code].kind == Kind::Lam && s.stack.empty();
    }

    Transition step(State& s) const {
        const auto& n = (*code_)[s.code];
        switch (n.kind) {
        case Kind::App: {
            DumpEntry d{make(n.left, env_restrict(s.env, (*code_)[n.left].fv)), std::move(s.stack)};
            s.dump_bits += d.fn->bits + d.stack.bits;
            s.dump_count += d.fn->count + d.stack.count;
            s.dump.push_back(std::move(d));
            s.stack = Stack{};
            s.env = env_restrict(s.env, (*code_)[n.right].fv);
            s.code = n.right;
            check(s);
            return Transition::Sea;
        }
        case Kind::Lam: {
            if (!s.stack.empty()) {
                ClosurePtr c = s.stack.pop();
                s.code = n.left;
                if (!n.binder_used) {
                    check(s);
                    return Transition::BetaW;
                }
                NodeId x = static_cast<NodeId>(&n - &(*code_)[0]);
                auto it = std::lower_bound(s.env.begin(), s.env.end(), x,
                                           [](const EnvEntry& en, NodeId b) { return en.binder < b; });
                s.env.insert(it, EnvEntry{x, std::move(c)});
                check(s);
                return Transition::BetaNW;
            }
            if (s.dump.empty()) throw InvariantViolation("lam: ret on an empty dump");
            DumpEntry d = std::move(s.dump.back());
            s.dump.pop_back();
            s.dump_bits -= d.fn->bits + d.stack.bits;
            s.dump_count -= d.fn->count + d.stack.count;
            ClosurePtr value = make(s.code, std::move(s.env));
            s.stack = std::move(d.stack);
            s.stack.push(std::move(value));
            s.code = d.fn->code;
            s.env = d.fn->env;
            return Transition::Ret;
        }
        case Kind::Var: {
            if (s.env.size() != 1 || s.env[0].binder != n.binder)
                throw InvariantViolation("lam: sub on a non-singleton environment");
            ClosurePtr c = s.env[0].value;
            s.code = c->code;
            s.env = c->env;
            return Transition::Sub;
        }
        }
        throw InvariantViolation("lam: bad node");
    }

    void check(const State& s) const {
        if (!env_domain_is(s.env, (*code_)[s.code].fv)) throw InvariantViolation("lam: dom e differs from fv(t)");
    }

    std::uint64_t bit_size(const State& s) const {
        return s.dump_bits + model_.code_bits(s.code) + model_.env_bits(s.code, s.env) + s.stack.bits;
    }
    std::uint64_t abstract_space(const State& s) const {
        return s.dump_count + 1 + SizeModel::env_count(s.env) + s.stack.count;
    }
    std::uint64_t heap_cells(const State&) const { return 0; }

    // the current term with its stack, wrapped by the dump contexts
    Term decode(const State& s) const {
        Decoder d(*code_);
        Term t = d.at(s.code, s.env);
        for (std::size_t k = s.stack.items.size(); k-- > 0;) t = app(t, d.closure(s.stack.items[k]));
        for (std::size_t j = s.dump.size(); j-- > 0;) {
            t = app(d.closure(s.dump[j].fn), t);
            const auto& st = s.dump[j].stack.items;
            for (std::size_t k = st.size(); k-- > 0;) t = app(t, d.closure(st[k]));
        }
        return t;
    }

private:
    CodePtr code_;
    SizeModel model_;
};

// ---------------------------------------------------------------------------
// type-erased entry point

enum class MachineKind : std::uint8_t { Naive, Space, Time, Lam };

inline std::string_view machine_name(MachineKind k) {
    switch (k) {
    case MachineKind::Naive: return NaiveKam::name;
    case MachineKind::Space: return SpaceKam::name;
    case MachineKind::Time: return TimeKam::name;
    case MachineKind::Lam: return SpaceLam::name;
    }
    return "?";
}

inline MachineKind parse_machine(std::string_view s) {
    if (s == "naive") return MachineKind::Naive;
    if (s == "space") return MachineKind::Space;
    if (s == "time") return MachineKind::Time;
    if (s == "lam") return MachineKind::Lam;
    throw std::invalid_argument("unknown machine '" + std::string(s) + "'");
}

inline RunProfile run(MachineKind k, const CodePtr& code, std::uint64_t fuel, const RunOptions& opt = {}) {
    switch (k) {
    case MachineKind::Naive: {
        NaiveKam m(code);
        return drive(m, m.initial(), fuel, opt).profile;
    }
    case MachineKind::Space: {
        SpaceKam m(code);
        return drive(m, m.initial(), fuel, opt).profile;
    }
    case MachineKind::Time: {
        TimeKam m(code);
        return drive(m, m.initial(), fuel, opt).profile;
    }
    case MachineKind::Lam: {
        SpaceLam m(code);
        return drive(m, m.initial(), fuel, opt).profile;
    }
    }
    throw std::invalid_argument("unknown machine");
}

inline RunProfile run(MachineKind k, const Term& t0, std::uint64_t fuel, const RunOptions& opt = {}) {
    if (!is_closed(t0)) throw std::invalid_argument("machines run closed terms only");
    return run(k, compile(t0), fuel, opt);
}

}  // namespace lamspace
