#pragma once
#include "cyclic/proof.hpp"
#include "cyclic/term.hpp"

#include <stdexcept>
#include <string>

namespace cyclic {

class CompileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// finite B-derivation (srec allowed) with the same semantics as t
ProofGraph term_to_derivation(const TermPtr& t, const std::string& name = "derivation");
// each srec node becomes a condB loop through cutN
ProofGraph srec_eliminate(const ProofGraph& g);
// circular proof for an NB term; free oracles become oracle leaves
ProofGraph nb_to_circular(const TermPtr& t, const std::string& name = "circular");

// true iff no cutB lies on a path from root to an oracle leaf
bool oracle_paths_cutbox_free(const ProofGraph& g, NodeId root);

}  // namespace cyclic
