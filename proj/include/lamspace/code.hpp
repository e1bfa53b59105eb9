#pragma once

#include "term.hpp"

namespace lamspace {

using NodeId = std::uint32_t;
inline constexpr NodeId no_node = 0xFFFFFFFFu;

// One constructor of the initial code t0. Nodes are stored in in-order, so
// the left address of node `id` is id + 1.
struct CodeNode {
    Kind kind;
    std::uint32_t index = 0;      // Var: de Bruijn index
    NodeId left = no_node;        // App left / Lam body
    NodeId right = no_node;       // App right
    NodeId parent = no_node;
    NodeId binder = no_node;      // Var: the Lam node binding it (no_node if free in t0)
    std::uint32_t lam_depth = 0;  // abstractions strictly above this node
    std::uint32_t size = 1;       // constructor size of the sub-term
    NodeId first = 0;             // smallest id inside the sub-term
    bool binder_used = false;     // Lam: its variable occurs in the body
    std::vector<NodeId> fv;       // binders of the free variables, sorted
    Term term;                    // the sub-term itself
};

class Code {
public:
    explicit Code(Term t0) : term_(std::move(t0)) {
        root_ = build(term_, no_node, 0);
        std::vector<NodeId> lams;
        bind(root_, lams);
        compute_fv();
    }

    const Term& term() const { return term_; }
    NodeId root() const { return root_; }
    std::size_t size() const { return nodes_.size(); }
    const CodeNode& operator[](NodeId id) const { return nodes_.at(id); }
    const std::vector<CodeNode>& nodes() const { return nodes_; }

    std::uint64_t left_address(NodeId id) const {
        if (id >= nodes_.size()) throw std::out_of_range("node does not belong to the code");
        return id + 1;
    }
    std::uint64_t left_address_bits(NodeId id) const { return bits(left_address(id)); }
    std::uint64_t uniform_log_bits() const { return bits(nodes_.size()); }

    bool contains(NodeId outer, NodeId inner) const {
        const auto& n = nodes_.at(outer);
        return inner >= n.first && inner < n.first + n.size;
    }
    bool occurs_free(NodeId id, NodeId binder) const {
        const auto& f = nodes_.at(id).fv;
        return std::binary_search(f.begin(), f.end(), binder);
    }
    // binder distance of `binder` seen from node `id` (its de Bruijn index there)
    std::uint32_t distance(NodeId id, NodeId binder) const {
        return nodes_.at(id).lam_depth - nodes_.at(binder).lam_depth;
    }

private:
    NodeId build(const Term& t, NodeId parent, std::uint32_t depth) {
        switch (t->kind) {
        case Kind::Var: {
            NodeId id = push(t, parent, depth);
            nodes_[id].index = t->index;
            nodes_[id].first = id;
            return id;
        }
        case Kind::Lam: {
            NodeId id = push(t, parent, depth);
            NodeId body = build(t->a, id, depth + 1);
            nodes_[id].left = body;
            nodes_[id].first = id;
            nodes_[id].size = nodes_[body].size + 1;
            return id;
        }
        case Kind::App: {
            // left subtree first, then this node, then the right subtree
            std::size_t mark = nodes_.size();
            NodeId l = build(t->a, no_node, depth);
            NodeId id = push(t, parent, depth);
            NodeId r = build(t->b, id, depth);
            nodes_[l].parent = id;
            nodes_[id].left = l;
            nodes_[id].right = r;
            nodes_[id].first = static_cast<NodeId>(mark);
            nodes_[id].size = nodes_[l].size + nodes_[r].size + 1;
            return id;
        }
        }
        return no_node;
    }

    NodeId push(const Term& t, NodeId parent, std::uint32_t depth) {
        CodeNode n;
        n.kind = t->kind;
        n.parent = parent;
        n.lam_depth = depth;
        n.term = t;
        nodes_.push_back(std::move(n));
        return static_cast<NodeId>(nodes_.size() - 1);
    }

    void bind(NodeId id, std::vector<NodeId>& lams) {
        auto& n = nodes_[id];
        switch (n.kind) {
        case Kind::Var:
            if (n.index <= lams.size()) {
                n.binder = lams[lams.size() - n.index];
                nodes_[n.binder].binder_used = true;
            }
            break;
        case Kind::Lam:
            lams.push_back(id);
            bind(n.left, lams);
            lams.pop_back();
            break;
        case Kind::App:
            bind(n.left, lams);
            bind(n.right, lams);
            break;
        }
    }

    void compute_fv() {
        // children are visited before parents in post-order; recursion depth
        // follows the term depth, which stays modest for our codes
        auto go = [&](auto&& self, NodeId id) -> void {
            auto& n = nodes_[id];
            switch (n.kind) {
            case Kind::Var:
                if (n.binder != no_node) n.fv = {n.binder};
                break;
            case Kind::Lam: {
                self(self, n.left);
                for (NodeId b : nodes_[n.left].fv)
                    if (b != id) n.fv.push_back(b);
                break;
            }
            case Kind::App: {
                self(self, n.left);
                self(self, n.right);
                const auto& a = nodes_[n.left].fv;
                const auto& b = nodes_[n.right].fv;
                std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(n.fv));
                break;
            }
            }
        };
        go(go, root_);
    }

    Term term_;
    NodeId root_;
    std::vector<CodeNode> nodes_;
};

using CodePtr = std::shared_ptr<const Code>;

inline CodePtr compile(const Term& t0) { return std::make_shared<const Code>(t0); }

}  // namespace lamspace
