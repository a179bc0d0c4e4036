#pragma once
#include "cyclic/proof.hpp"
#include "cyclic/term.hpp"

#include <functional>
#include <stdexcept>

namespace cyclic {

class TranslateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// guarded recursion program computing the root of an accepted (CB or CNB) proof;
// one function per loop entry point, mutually recursive blocks per strongly connected component
PPProgram translate(const ProofGraph& g, bool flatten = true);

// pads every function of a block to the block's largest arity with zero inputs
PPProgram normalize_arities(const PPProgram& p);
// one function with rotation tags per multi-function block; the old names become wrappers
PPProgram flatten_blocks(const PPProgram& p);

// rebuilds t bottom-up, sharing unchanged subterms; f returns nullptr to keep a node
TermPtr rewrite_term(const TermPtr& t, const std::function<TermPtr(const TermPtr&)>& f);

}  // namespace cyclic
