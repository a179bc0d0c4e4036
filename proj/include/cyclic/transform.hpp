#pragma once
#include "cyclic/proof.hpp"
#include "cyclic/term.hpp"
#include "cyclic/value.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace cyclic {

class TransformError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class NotProgressing : public TransformError {
public:
    using TransformError::TransformError;
};
class ShapeViolation : public TransformError {
public:
    using TransformError::TransformError;
};

// all inputs normal: [[D]](x;y) = [[D']](x,y;); no wN, eN, cutN, condN in the output
ProofGraph box_promote(const ProofGraph& g);

// root concludes bN; output has no safe inputs and the same value
ProofGraph strip_safe_inputs(const ProofGraph& g);
// in-place variant: adds the stripped copy of node v to g and returns its id
NodeId strip_safe_inputs_into(ProofGraph& g, NodeId v);

// oracle leaves named a (all-safe contexts) become leaves named a_star taking the root's normals first
ProofGraph pass_parameters(const ProofGraph& g, const std::string& a, const std::string& a_star);
NodeId pass_parameters_into(ProofGraph& g, NodeId root, const std::string& a, const std::string& a_star);

struct SimultaneousReduction {
    TermPtr f;                       // one recursion with k extra safe tag inputs
    std::vector<TermPtr> selectors;  // selector_i(x;y) = f(x;y,perm_i)
    std::vector<std::vector<int>> tags;
};
// rotation <i, i+1, .., k, 1, .., i-1> for i in 1..k
std::vector<int> rotation_tag(int i, int k);
SimultaneousReduction reduce_simultaneous(const TermPtr& simrec);

// dispatch helpers shared with program flattening
TermPtr equals_constant(int m, int n, const TermPtr& t, const Value& c);  // 1 if t = c else 0
TermPtr tag_dispatch(int m, int n, int first_tag, const std::vector<std::vector<int>>& tags,
                     const std::vector<TermPtr>& bodies);

}  // namespace cyclic
