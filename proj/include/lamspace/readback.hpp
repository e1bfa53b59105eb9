#pragma once

#include "machines.hpp"

namespace lamspace {

// The working set of the read-back: one position in t0, the split of the
// queried address and the closure the position belongs to. Live cursors are
// counted so that tests can check that a query never holds more than one.
class Cursor {
public:
    Cursor(NodeId node, NodeId root, const Env* env, const TreeAddress& address)
        : node_(node), root_(root), env_(env), address_(&address) {
        ++live_;
        max_live_ = std::max(max_live_, live_);
    }
    Cursor(const Cursor&) = delete;
    Cursor& operator=(const Cursor&) = delete;
    ~Cursor() { --live_; }

    NodeId node() const { return node_; }
    NodeId root() const { return root_; }
    const Env& env() const { return *env_; }
    std::size_t consumed() const { return consumed_; }
    std::size_t remaining() const { return address_->size() - consumed_; }
    bool next_bit() const { return (*address_)[consumed_]; }

    void descend(NodeId child) {
        node_ = child;
        ++consumed_;
    }
    // enter the closure bound to a variable; the address is not consumed
    void jump(const ClosurePtr& c) {
        node_ = c->code;
        root_ = c->code;
        env_ = &c->env;
    }

    static std::size_t live() { return live_; }
    static std::size_t max_live() { return max_live_; }
    static void reset_max() { max_live_ = live_; }

private:
    NodeId node_;
    NodeId root_;
    const Env* env_;
    const TreeAddress* address_;
    std::size_t consumed_ = 0;

    static inline thread_local std::size_t live_ = 0;
    static inline thread_local std::size_t max_live_ = 0;
};

struct ReadbackStats {
    std::size_t steps = 0;
    std::size_t jumps = 0;
};

// Label of the decoded closure (code, env) at address a0, read directly off
// t0 and the environments without decoding anything.
inline Label constructor_at(const Code& t0, NodeId code, const Env& env, const TreeAddress& a0,
                            ReadbackStats* stats = nullptr) {
    Cursor c(code, code, &env, a0);
    ReadbackStats local;
    ReadbackStats& st = stats ? *stats : local;
    while (true) {
        ++st.steps;
        const auto& n = t0[c.node()];
        if (n.kind == Kind::Var) {
            if (n.binder == no_node || !t0.contains(c.root(), n.binder)) {
                const EnvEntry* en = env_lookup(c.env(), n.binder);
                if (!en) return Label::undefined();
                ++st.jumps;
                c.jump(en->value);
                continue;
            }
            return c.remaining() == 0 ? Label::db(n.index) : Label::undefined();
        }
        if (c.remaining() == 0) return n.kind == Kind::Lam ? Label::lambda() : Label::apply();
        if (n.kind == Kind::Lam) c.descend(n.left);
        else c.descend(c.next_bit() ? n.right : n.left);
    }
}

inline Label constructor_at(const Code& t0, const ClosurePtr& final_closure, const TreeAddress& a0,
                            ReadbackStats* stats = nullptr) {
    return constructor_at(t0, final_closure->code, final_closure->env, a0, stats);
}

// final states only: the active code with its environment, nothing on the stack
inline Label constructor_at(const Code& t0, const KamState& s, const TreeAddress& a0, ReadbackStats* stats = nullptr) {
    if (!s.stack.empty()) throw std::invalid_argument("read-back needs a final state with an empty stack");
    return constructor_at(t0, s.code, s.env, a0, stats);
}

inline Label constructor_at(const Code& t0, const LamState& s, const TreeAddress& a0, ReadbackStats* stats = nullptr) {
    if (!s.stack.empty() || !s.dump.empty())
        throw std::invalid_argument("read-back needs a final state with an empty stack");
    return constructor_at(t0, s.code, s.env, a0, stats);
}

template <class S1, class S2>
bool finals_equal_at(const S1& f1, const S2& f2, const TreeAddress& a, const Code& t0a, const Code& t0b) {
    return constructor_at(t0a, f1, a) == constructor_at(t0b, f2, a);
}

// every address of length at most `max_len`, shortest first
inline std::vector<TreeAddress> all_addresses(std::size_t max_len) {
    std::vector<TreeAddress> out{{}};
    for (std::size_t from = 0; from < out.size(); ++from) {
        if (out[from].size() == max_len) continue;
        for (bool b : {false, true}) {
            TreeAddress a = out[from];
            a.push_back(b);
            out.push_back(std::move(a));
        }
    }
    return out;
}

}  // namespace lamspace
