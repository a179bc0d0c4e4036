#pragma once
#include "cyclic/proof.hpp"

#include <limits>
#include <map>
#include <string>
#include <vector>

namespace cyclic {

// node -> representative (smallest id) of its bisimulation class
std::map<NodeId, NodeId> bisimulation_classes(const ProofGraph& g);
// quotient by bisimulation, restricted to nodes reachable from the root
ProofGraph minimize(const ProofGraph& g);

struct CycleNF {
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
    struct Pos {
        NodeId node = 0;  // node of the minimized graph
        std::size_t parent = npos;
        std::size_t premise = 0;  // index of this position among its parent's premises
        std::vector<std::size_t> children;
        std::size_t end = 0;  // preorder positions of the subtree are [self, end)
        bool bud = false;
        std::size_t companion = npos;
    };
    ProofGraph graph;  // minimized source
    std::vector<Pos> tree;  // preorder, root at 0
    std::vector<std::size_t> buds;
    std::map<std::size_t, std::vector<std::size_t>> companions;  // companion -> its buds

    bool in_subtree(std::size_t root, std::size_t p) const { return p >= root && p < tree[root].end; }
};

class CycleNFError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

CycleNF cycle_normal_form(const ProofGraph& g, std::size_t max_positions = 1000000);
// companions become dis nodes listing their buds (as tree positions); buds become back-edges
ProofGraph cnf_to_graph(const CycleNF& cnf);

struct CloseOpen {
    std::vector<std::size_t> close;
    std::vector<std::size_t> open;
};
CloseOpen close_open_sets(const CycleNF& cnf, std::size_t pos);

struct PathViolation {
    int clause = 0;  // 1: no condB; 2: CNB shape; 3: CB shape
    NodeId node = 0;
    std::string what;
};
struct PathReport {
    std::size_t bud = 0, companion = 0;
    std::vector<NodeId> path;  // minimized-graph nodes from companion up to the bud's parent
    bool has_condbox = false;
    std::vector<PathViolation> violations;
};
std::vector<PathReport> cycle_path_diagnostics(const CycleNF& cnf);
std::size_t count_violations(const std::vector<PathReport>& reports, int clause);

}  // namespace cyclic
