#pragma once

#include "cyclic/proof.hpp"
#include "cyclic/term.hpp"
#include "cyclic/value.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace cyclic {

enum class GuardMode { ZeroResult, StrictError };

struct EvalConfig {
    std::uint64_t fuel = 1000000;
    bool memo = true;
    GuardMode guard_mode = GuardMode::ZeroResult;
};

struct EvalStats {
    std::uint64_t steps = 0;
    std::size_t memo_keys = 0;
    std::size_t max_depth = 0;
    std::size_t guard_fallbacks = 0;
    std::size_t guarded_calls = 0;
};

class FuelExhausted : public std::runtime_error {
public:
    FuelExhausted() : std::runtime_error("fuel exhausted") {}
};

class GuardViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using OracleFn = std::function<Value(const Values& normals, const Values& safes)>;
using OracleEnv = std::map<std::string, OracleFn>;

Value eval_proof(const ProofGraph& g, NodeId node, const Values& normals, const Values& safes,
                 const EvalConfig& cfg = {}, EvalStats* stats = nullptr, const OracleEnv* env = nullptr);

inline Value eval_proof(const ProofGraph& g, const Values& normals, const Values& safes, const EvalConfig& cfg = {}) {
    return eval_proof(g, g.root, normals, safes, cfg);
}

Value eval_term(const TermPtr& t, const OracleEnv& env, const Values& normals, const Values& safes,
                const EvalConfig& cfg = {}, EvalStats* stats = nullptr);

Value eval_pp(const PPProgram& prog, const std::string& fname, const OracleEnv& env, const Values& normals,
              const Values& safes, const EvalConfig& cfg = {}, EvalStats* stats = nullptr);

enum class TermClass { B, SB, NB, Bpp, SBpp, NBpp };

const char* term_class_name(TermClass c);
std::optional<TermClass> term_class_from_name(const std::string& s);

struct ClassViolation {
    std::string rule;
    std::string subterm;
};

std::optional<ClassViolation> check_term_class(const TermPtr& t, TermClass cls);
std::optional<ClassViolation> check_program_class(const PPProgram& p, TermClass cls);

}  // namespace cyclic
