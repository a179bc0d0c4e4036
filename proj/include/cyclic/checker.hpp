#pragma once

#include "cyclic/proof.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cyclic {

enum class ProofClass { CB, CNB, None };
enum class Progress { Progressing, NotProgressing, UnknownUnsafe };

const char* class_name(ProofClass c);
const char* progress_name(Progress p);

struct CheckResult {
    bool ok = true;
    std::vector<NodeId> witness;  // simple cycle, first node repeated implicitly
};

struct Classification {
    bool valid = true;
    bool safe = true;
    bool left_leaning = true;
    Progress progressing = Progress::Progressing;
    std::vector<NodeId> witness_cycle;
    ProofClass cls = ProofClass::None;
    std::vector<std::string> diagnostics;
};

// strongly connected components of the reachable graph; comp[v] indexes the component
struct SccInfo {
    std::map<NodeId, int> comp;
    std::vector<std::vector<NodeId>> members;
    std::vector<bool> cyclic;  // has at least one internal edge
    bool on_cycle(NodeId v) const { return cyclic[static_cast<std::size_t>(comp.at(v))]; }
    bool same(NodeId a, NodeId b) const { return comp.at(a) == comp.at(b); }
};

using EdgeFilter = std::function<bool(NodeId from, std::size_t premise_index)>;

SccInfo strongly_connected(const ProofGraph& g, const EdgeFilter& keep = nullptr);

// shortest cycle starting with the edge from -> premises[index], following only kept edges
std::optional<std::vector<NodeId>> shortest_cycle_through_edge(const ProofGraph& g, NodeId from, std::size_t index,
                                                               const EdgeFilter& keep = nullptr);
std::optional<std::vector<NodeId>> shortest_cycle_through(const ProofGraph& g, NodeId v,
                                                          const EdgeFilter& keep = nullptr);

CheckResult check_safety(const ProofGraph& g);
CheckResult check_left_leaning(const ProofGraph& g);
Progress check_progressing_safe(const ProofGraph& g, std::vector<NodeId>* witness = nullptr);
Classification classify(const ProofGraph& g);

std::string report_json(const ProofGraph& g, const Classification& c);

}  // namespace cyclic
