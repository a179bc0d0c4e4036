#pragma once
#include "cyclic/proof.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace cyclic::detail {

inline Sequent sq(int b, int p, SType s = SType::Plain) { return Sequent{b, p, s}; }

struct Builder {
    ProofGraph& g;
    NodeId next;

    explicit Builder(ProofGraph& graph) : g(graph), next(graph.fresh_id() == 0 ? 1 : graph.fresh_id()) {}

    // other builders may have added nodes to the same graph
    NodeId reserve() {
        next = std::max(next, g.fresh_id());
        return next++;
    }

    void set(NodeId id, Rule r, Sequent s, std::vector<NodeId> prem, int pos = 0, std::string oracle = {}) {
        Node n;
        n.rule = r;
        n.pos = pos;
        n.oracle = std::move(oracle);
        n.seq = s;
        n.premises = std::move(prem);
        g.nodes[id] = std::move(n);
    }

    NodeId add(Rule r, Sequent s, std::vector<NodeId> prem, int pos = 0, std::string oracle = {}) {
        NodeId id = reserve();
        set(id, r, s, std::move(prem), pos, std::move(oracle));
        return id;
    }

    // one-premise chain; steps are listed bottom (conclusion side) first
    struct Step {
        Rule rule;
        int pos;
        Sequent seq;
    };
    NodeId chain(const std::vector<Step>& steps, NodeId top, NodeId bottom_id = 0) {
        NodeId cur = top;
        for (std::size_t i = steps.size(); i-- > 0;) {
            const Step& s = steps[i];
            if (i == 0 && bottom_id != 0) {
                set(bottom_id, s.rule, s.seq, {cur}, s.pos);
                cur = bottom_id;
            } else {
                cur = add(s.rule, s.seq, {cur}, s.pos);
            }
        }
        return cur;
    }
};

// boxed-zone exchanges bringing index k to the front (conclusion has n normals)
inline std::vector<Builder::Step> boxed_to_front(int k, int n, int p, SType succ) {
    std::vector<Builder::Step> out;
    for (int j = k - 1; j >= 0; --j) out.push_back({Rule::ExchBox, j, sq(n, p, succ)});
    return out;
}

// boxed-zone exchanges moving the front element to index k
inline std::vector<Builder::Step> boxed_from_front(int k, int n, int p, SType succ) {
    std::vector<Builder::Step> out;
    for (int j = 0; j < k; ++j) out.push_back({Rule::ExchBox, j, sq(n, p, succ)});
    return out;
}

}  // namespace cyclic::detail

#include <set>

namespace cyclic::detail {

inline void prune(ProofGraph& g) {
    std::set<NodeId> keep;
    for (NodeId v : reachable(g, g.root)) keep.insert(v);
    for (auto it = g.nodes.begin(); it != g.nodes.end();) it = keep.count(it->first) ? std::next(it) : g.nodes.erase(it);
}

inline NodeId resolve(const std::map<NodeId, NodeId>& alias, NodeId v) {
    for (auto it = alias.find(v); it != alias.end(); it = alias.find(v)) v = it->second;
    return v;
}

inline void apply_aliases(ProofGraph& g, const std::map<NodeId, NodeId>& alias) {
    if (alias.empty()) return;
    for (auto& [id, n] : g.nodes)
        for (auto& p : n.premises) p = resolve(alias, p);
    g.root = resolve(alias, g.root);
}

}  // namespace cyclic::detail
