#include "support.hpp"

#include "cyclic/interp.hpp"
#include "cyclic/term.hpp"

#include "doctest.h"

using namespace cyclic;
using namespace testsupport;

TEST_CASE("eval_proof: corpus golden values") {
    auto goldens = proof_goldens();
    std::mt19937_64 rng(5);
    for (auto& [name, golden] : goldens) {
        ProofGraph g = proof(name);
        const Sequent& s = g.at(g.root).seq;
        std::size_t budget = name == "E" ? 3 : (name == "N" ? 3 : 12);
        for (int i = 0; i < 60; ++i) {
            Values x, y;
            sample(rng, s.boxed, s.plain, budget, 10, x, y);
            CAPTURE(name);
            CHECK(eval_proof(g, x, y) == golden(x, y));
        }
    }
}

TEST_CASE("eval_proof: worked values") {
    CHECK(eval_proof(proof("S"), {7}, {}) == 8);
    CHECK(eval_proof(proof("C"), {2, 3}, {1}) == 30);
    CHECK(eval_proof(proof("E"), {1}, {3}) == 12);
    CHECK(eval_proof(proof("P"), {0}, {}) == 0);
    CHECK(eval_proof(proof("P"), {8}, {}) == 7);
    CHECK(eval_proof(proof("N"), {5}, {}) == 31);
    CHECK(eval_proof(proof("L"), {4}, {1}) == 15);
}

TEST_CASE("eval_proof: I exhausts its fuel") {
    EvalConfig cfg;
    cfg.fuel = 1000;
    for (int x = 0; x < 8; ++x) CHECK_THROWS_AS(eval_proof(proof("I"), {Value(x)}, {}, cfg), FuelExhausted);
}

TEST_CASE("eval_proof: memoization does not change results") {
    EvalConfig plain;
    plain.memo = false;
    ProofGraph e = proof("E");
    for (int x = 0; x < 8; ++x)
        for (int y = 0; y < 5; ++y) CHECK(eval_proof(e, {Value(x)}, {Value(y)}) == eval_proof(e, {Value(x)}, {Value(y)}, plain));
}

TEST_CASE("eval_proof: unfolding the root rule once") {
    // S at s_i x against its root conditional's premises at x
    ProofGraph s = proof("S");
    const Node& root = s.at(s.root);
    REQUIRE(root.rule == Rule::CondBox);
    for (int x = 1; x < 40; ++x) {
        NodeId branch = root.premises[x % 2 == 0 ? 1 : 2];
        CHECK(eval_proof(s, branch, {Value(x / 2)}, {}) == eval_proof(s, {Value(x)}, {}));
    }
    CHECK(eval_proof(s, root.premises[0], {}, {}) == eval_proof(s, {0}, {}));
}

TEST_CASE("eval_term: corpus golden values") {
    auto goldens = term_goldens();
    std::mt19937_64 rng(9);
    for (auto file : {"B.term", "NB.term"}) {
        TermDocument d = terms(file);
        for (auto& [name, t] : d.terms) {
            REQUIRE(goldens.count(name));
            std::size_t budget = std::string(file) == "NB.term" ? 3 : 12;
            for (int i = 0; i < 40; ++i) {
                Values x, y;
                sample(rng, t->m, t->n, budget, 10, x, y);
                CAPTURE(name);
                CHECK(eval_term(t, {}, x, y) == goldens[name](x, y));
            }
        }
    }
}

TEST_CASE("eval_term: initial functions") {
    CHECK(eval_term(zero(1, 1), {}, {5}, {6}) == 0);
    CHECK(eval_term(proj_normal(2, 1, 1), {}, {5, 6}, {7}) == 6);
    CHECK(eval_term(proj_safe(2, 1, 0), {}, {5, 6}, {7}) == 7);
    CHECK(eval_term(pred_fn(), {}, {}, {7}) == 3);
    CHECK(eval_term(cond_fn(), {}, {}, {0, 1, 2, 3}) == 1);
    CHECK(eval_term(cond_fn(), {}, {}, {4, 1, 2, 3}) == 2);
    CHECK(eval_term(cond_fn(), {}, {}, {5, 1, 2, 3}) == 3);
    CHECK(eval_term(constant(0, 0, "12345"), {}, {}, {}) == 12345);
}

TEST_CASE("eval_term: oracles come from the environment") {
    TermPtr t = comp_safe(1, 1, succ1(), {oracle("g", 1, 1)});
    OracleEnv env{{"g", [](const Values& x, const Values& y) { return x[0] + y[0]; }}};
    CHECK(eval_term(t, env, {4}, {5}) == 19);
    CHECK_THROWS(eval_term(t, {}, {4}, {5}));
}

TEST_CASE("eval_pp: guarded recursion") {
    TermDocument d = parse_terms(
        "program len\n"
        "fun f 1 0 = (comp-s 1 0 cond (pn 1 0 0) (zero 1 0)"
        " (comp-s 1 0 s1 (comp-n 1 0 (gcall f strict) (comp-s 1 0 p (pn 1 0 0))))"
        " (comp-s 1 0 s1 (comp-n 1 0 (gcall f strict) (comp-s 1 0 p (pn 1 0 0)))))\n"
        "main f\nend\n"
        "program loop\nfun g 1 0 = (gcall g strict)\nmain g\nend\n");
    REQUIRE(d.programs.size() == 2);
    for (int x = 0; x < 300; ++x) CHECK(eval_pp(d.programs[0], "f", {}, {Value(x)}, {}) == unbin(repeat("1", bin(Value(x)).size())));
    EvalConfig strict;
    strict.guard_mode = GuardMode::StrictError;
    EvalStats st;
    CHECK(eval_pp(d.programs[1], "g", {}, {5}, {}, EvalConfig{}, &st) == 0);
    CHECK(st.guard_fallbacks == 1);
    CHECK_THROWS_AS(eval_pp(d.programs[1], "g", {}, {5}, {}, strict), GuardViolation);
}

TEST_CASE("class checks") {
    TermDocument b = terms("B.term"), nb = terms("NB.term");
    for (auto& [name, t] : b.terms) {
        CAPTURE(name);
        CHECK_FALSE(check_term_class(t, TermClass::B));
        CHECK_FALSE(check_term_class(t, TermClass::NB));
    }
    CHECK(check_term_class(nb.term("ex"), TermClass::B));
    CHECK(check_term_class(nb.term("ex"), TermClass::SB));
    CHECK_FALSE(check_term_class(nb.term("ex"), TermClass::NB));
    CHECK_FALSE(check_term_class(nb.term("lsum"), TermClass::SB));
    CHECK_FALSE(check_term_class(nb.term("ncat"), TermClass::SB));
    CHECK_FALSE(check_term_class(nb.term("ex2"), TermClass::NBpp));
    // normal composition may not feed oracle-using terms into normal positions
    TermPtr bad = comp_normal(1, 0, proj_normal(1, 0, 0), {oracle("g", 1, 0)});
    CHECK(check_term_class(bad, TermClass::NBpp));
    CHECK(check_term_class(srec_pp("a", zero(1, 1)), TermClass::B));
    CHECK_FALSE(check_term_class(srec_pp("a", zero(1, 1)), TermClass::Bpp));
    CHECK(check_term_class(snrec_pp("a", zero(1, 1)), TermClass::Bpp));
    CHECK_FALSE(check_term_class(snrec_pp("a", zero(1, 1)), TermClass::NBpp));
}

TEST_CASE("term syntax round trip") {
    for (auto file : {"B.term", "NB.term"}) {
        TermDocument d = terms(file);
        TermDocument again = parse_terms(serialize_document(d));
        REQUIRE(again.terms.size() == d.terms.size());
        for (std::size_t i = 0; i < d.terms.size(); ++i)
            CHECK(serialize_term(again.terms[i].second) == serialize_term(d.terms[i].second));
    }
    CHECK_THROWS(parse_terms("term x = (comp-s 1 0 s0)\n"));
}
