#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cyclic {

enum class SType { Plain, Boxed };

struct Sequent {
    int boxed = 0;
    int plain = 0;
    SType succ = SType::Plain;
    friend bool operator==(const Sequent&, const Sequent&) = default;
    friend auto operator<=>(const Sequent&, const Sequent&) = default;
};

std::string to_string(const Sequent& s);

enum class Rule {
    Id, Zero, S0, S1, WeakN, WeakBox, ExchN, ExchBox, BoxL, BoxR,
    CutN, CutBox, CondN, CondBox, SRec, Oracle, Dis
};

const char* rule_name(Rule r);
std::optional<Rule> rule_from_name(const std::string& s);

using NodeId = std::uint64_t;

struct Node {
    Rule rule = Rule::Id;
    int pos = 0;                  // exchange position
    std::string oracle;           // oracle name
    std::vector<NodeId> dis;      // dis annotation
    Sequent seq;
    std::vector<NodeId> premises;
    friend bool operator==(const Node&, const Node&) = default;
};

struct ProofGraph {
    std::string name;
    NodeId root = 0;
    std::map<NodeId, Node> nodes;

    const Node& at(NodeId id) const;
    bool has(NodeId id) const { return nodes.count(id) != 0; }
    NodeId fresh_id() const { return nodes.empty() ? 0 : nodes.rbegin()->first + 1; }
    friend bool operator==(const ProofGraph&, const ProofGraph&) = default;
};

struct StepError {
    NodeId node = 0;
    std::string message;
};

std::optional<StepError> validate_step(const ProofGraph& g, NodeId id);

enum class GraphKind { Circular, Derivation, WithOracles, CycleNF };

std::vector<StepError> validate_graph(const ProofGraph& g, GraphKind kind = GraphKind::Circular);

std::vector<NodeId> reachable(const ProofGraph& g, NodeId from);

std::map<Rule, int> rule_census(const ProofGraph& g);

class ProofError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cyclic
