#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace cyclic {

enum class Op {
    Zero, ProjN, ProjS, S0, S1, Pred, Cond, Oracle,
    CompSafe, CompNormal, SRecN, SNRec, SRecPP, SNRecPP, SimRecPP,
    GuardedCall, Call
};

enum class Guard { StrictNormals, StrictNormalsSubsetSafes };

const char* guard_name(Guard g);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    Op op = Op::Zero;
    int m = 0, n = 0;              // normal / safe arity
    int index = 0;                 // projection index, SimRecPP selection
    std::string name;              // oracle, bound oracle, callee
    std::vector<std::string> names;  // SimRecPP oracles
    Guard guard = Guard::StrictNormals;
    std::vector<TermPtr> args;
};

class TermError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

TermPtr zero(int m = 0, int n = 0);
TermPtr proj_normal(int m, int n, int i);
TermPtr proj_safe(int m, int n, int j);
TermPtr succ0();
TermPtr succ1();
TermPtr pred_fn();
TermPtr cond_fn();
TermPtr oracle(const std::string& name, int m, int n);
// f(x;y) = h(x;t(x;y)); h may ignore the normals (h.m == 0)
TermPtr comp_safe(int m, int n, TermPtr h, std::vector<TermPtr> ts);
// f(x;y) = h(r(x;);y)
TermPtr comp_normal(int m, int n, TermPtr h, std::vector<TermPtr> rs);
TermPtr srec(TermPtr g, TermPtr h0, TermPtr h1);
TermPtr snrec(const std::string& a, TermPtr g, TermPtr h0, TermPtr h1);
TermPtr srec_pp(const std::string& a, TermPtr h);
TermPtr snrec_pp(const std::string& a, TermPtr h);
TermPtr simrec_pp(Guard guard, int select, std::vector<std::string> as, std::vector<TermPtr> hs);
TermPtr guarded_call(const std::string& f, int m, int n, Guard guard);
TermPtr call(const std::string& f, int m, int n);
TermPtr constant(int m, int n, const std::string& decimal);

bool is_oracle_free(const TermPtr& t);
bool is_structural_normal(const TermPtr& t);  // comp_normal whose r are distinct normal projections
std::size_t term_size(const TermPtr& t);

struct PPFunction {
    std::string name;
    int m = 0, n = 0;
    TermPtr body;
    int block = 0;  // functions of one block are mutually recursive
};

struct PPProgram {
    std::string name;
    std::vector<PPFunction> functions;
    std::string main;
    const PPFunction& function(const std::string& f) const;
    bool has(const std::string& f) const;
};

struct OracleDecl {
    int m = 0, n = 0;
};

struct TermDocument {
    std::map<std::string, OracleDecl> oracles;
    std::vector<std::pair<std::string, TermPtr>> terms;
    std::vector<PPProgram> programs;
    TermPtr term(const std::string& name) const;
};

TermDocument parse_terms(const std::string& text);
std::string serialize_term(const TermPtr& t);
std::string serialize_program(const PPProgram& p);
std::string serialize_document(const TermDocument& d);

}  // namespace cyclic
