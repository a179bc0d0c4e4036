#include "support.hpp"

#include "cyclic/checker.hpp"
#include "cyclic/compile.hpp"
#include "cyclic/format.hpp"
#include "cyclic/interp.hpp"

#include "doctest.h"

using namespace cyclic;
using namespace testsupport;

TEST_CASE("term_to_derivation: acyclic derivations with the same semantics") {
    std::mt19937_64 rng(12);
    auto goldens = term_goldens();
    for (auto& [name, t] : terms("B.term").terms) {
        CAPTURE(name);
        ProofGraph d = term_to_derivation(t, name);
        CHECK(validate_graph(d, GraphKind::Derivation).empty());
        CHECK(back_edges(d).empty());
        const Sequent& s = d.at(d.root).seq;
        CHECK(s == Sequent{t->m, t->n, SType::Plain});
        for (int i = 0; i < 40; ++i) {
            Values x, y;
            sample(rng, t->m, t->n, 10, 10, x, y);
            CHECK(eval_proof(d, x, y) == goldens[name](x, y));
        }
    }
    CHECK_THROWS_AS(term_to_derivation(terms("NB.term").term("ex")), CompileError);
}

TEST_CASE("term_to_derivation: non-recursive terms use no srec") {
    TermDocument b = terms("B.term");
    for (auto name : {"parity", "half"}) CHECK(rule_census(term_to_derivation(b.term(name))).count(Rule::SRec) == 0);
    CHECK(rule_census(term_to_derivation(b.term("cat"))).count(Rule::SRec) == 1);
}

TEST_CASE("srec_eliminate: B terms become CB proofs") {
    std::mt19937_64 rng(13);
    for (auto& [name, t] : terms("B.term").terms) {
        CAPTURE(name);
        ProofGraph d = term_to_derivation(t, name);
        ProofGraph c = srec_eliminate(d);
        CHECK(validate_graph(c).empty());
        CHECK(rule_census(c).count(Rule::SRec) == 0);
        CHECK(classify(c).cls == ProofClass::CB);
        for (int i = 0; i < 40; ++i) {
            Values x, y;
            sample(rng, t->m, t->n, 10, 10, x, y);
            CHECK(eval_proof(c, x, y) == eval_term(t, {}, x, y));
        }
    }
}

TEST_CASE("nb_to_circular: NB terms become CNB proofs") {
    std::mt19937_64 rng(14);
    auto goldens = term_goldens();
    for (auto& [name, t] : terms("NB.term").terms) {
        CAPTURE(name);
        ProofGraph c = nb_to_circular(t, name);
        CHECK(validate_graph(c).empty());
        CHECK(oracle_paths_cutbox_free(c, c.root));
        Classification cls = classify(c);
        CHECK(cls.cls != ProofClass::None);
        if (name == "ex") CHECK(cls.cls == ProofClass::CNB);
        for (int i = 0; i < 30; ++i) {
            Values x, y;
            sample(rng, t->m, t->n, 3, 8, x, y);
            CHECK(eval_proof(c, x, y) == goldens[name](x, y));
        }
        CHECK(parse_proof(serialize_proof(c)) == c);
    }
    CHECK_THROWS_AS(nb_to_circular(srec_pp("a", zero(1, 1))), CompileError);
}

TEST_CASE("nb_to_circular: oracle leaves survive compilation") {
    TermDocument d = parse_terms("oracle g 1 1\nterm t = (comp-s 1 1 s1 (call g))\n");
    ProofGraph c = nb_to_circular(d.term("t"));
    bool leaf = false;
    for (const auto& [id, n] : c.nodes) leaf = leaf || (n.rule == Rule::Oracle && n.oracle == "g");
    CHECK(leaf);
    OracleEnv env{{"g", [](const Values& x, const Values& y) { return x[0] * 3 + y[0]; }}};
    CHECK(eval_proof(c, c.root, {4}, {5}, {}, nullptr, &env) == 35);
}
