#include "fixtures.hpp"
#include "support.hpp"

#include "cyclic/checker.hpp"
#include "cyclic/cnf.hpp"
#include "cyclic/compile.hpp"
#include "cyclic/interp.hpp"
#include "cyclic/transform.hpp"

#include "doctest.h"

#include <set>

using namespace cyclic;
using namespace testsupport;

namespace {

const char* kAccepted[] = {"S", "C", "E", "L", "M"};
const char* kEvaluable[] = {"S", "C", "E", "P", "L", "N", "M"};

std::size_t budget_for(const std::string& name) { return name == "E" || name == "N" ? 3 : 10; }

bool is_axiom(Rule r) { return r == Rule::Id || r == Rule::Zero || r == Rule::Oracle; }

}  // namespace

TEST_CASE("cycle normal form: bud and companion counts") {
    CycleNF s = cycle_normal_form(proof("S"));
    REQUIRE(s.buds.size() == 1);
    CHECK(s.tree[s.buds[0]].companion == 0);
    CycleNF c = cycle_normal_form(proof("C"));
    CHECK(c.companions.size() == 2);
    std::set<std::size_t> comps;
    for (std::size_t b : c.buds) comps.insert(c.tree[b].companion);
    CHECK(comps.size() == 2);
    ProofGraph d = term_to_derivation(terms("B.term").term("parity"));
    CHECK(cycle_normal_form(d).buds.empty());
}

TEST_CASE("cycle normal form: structural invariants") {
    for (auto name : {"I", "S", "C", "E", "P", "L", "N", "Eprime", "M"}) {
        CAPTURE(name);
        CycleNF cnf = cycle_normal_form(proof(name));
        auto cls = bisimulation_classes(cnf.graph);
        std::set<std::size_t> buds(cnf.buds.begin(), cnf.buds.end());
        for (std::size_t b : cnf.buds) {
            for (std::size_t other : cnf.buds)
                if (other != b) CHECK_FALSE(cnf.in_subtree(b, other));
            std::size_t comp = cnf.tree[b].companion;
            CHECK(comp < b);
            CHECK(cnf.in_subtree(comp, b));
            CHECK(cls.at(cnf.tree[comp].node) == cls.at(cnf.tree[b].node));
        }
        for (std::size_t p = 0; p < cnf.tree.size(); ++p) {
            if (!cnf.tree[p].children.empty()) continue;
            CHECK((buds.count(p) || is_axiom(cnf.graph.at(cnf.tree[p].node).rule)));
        }
        // nodes below the bar are distinct along each branch
        for (std::size_t p = 0; p < cnf.tree.size(); ++p) {
            if (cnf.tree[p].bud) continue;
            for (std::size_t q = cnf.tree[p].parent; q != CycleNF::npos; q = cnf.tree[q].parent)
                CHECK(cls.at(cnf.tree[q].node) != cls.at(cnf.tree[p].node));
        }
        ProofGraph refolded = cnf_to_graph(cnf);
        CHECK(validate_graph(refolded, GraphKind::CycleNF).empty());
        EvalConfig cfg;
        ProofGraph orig = proof(name);
        if (std::string(name) == "I" || std::string(name) == "Eprime") continue;
        std::mt19937_64 rng(2);
        const Sequent& s = orig.at(orig.root).seq;
        for (int i = 0; i < 20; ++i) {
            Values x, y;
            sample(rng, s.boxed, s.plain, budget_for(name), 8, x, y);
            CHECK(eval_proof(refolded, x, y) == eval_proof(orig, x, y));
        }
    }
}

TEST_CASE("cycle normal form: close and open sets") {
    CycleNF s = cycle_normal_form(proof("S"));
    CHECK(close_open_sets(s, 0).open.empty());
    CHECK(close_open_sets(s, 0).close == std::vector<std::size_t>{0});
    std::size_t b = s.buds[0];
    CHECK(close_open_sets(s, b).open == std::vector<std::size_t>{b});
    CHECK(close_open_sets(s, b).close.empty());
    for (std::size_t p = 1; p < s.tree.size(); ++p) {
        CloseOpen co = close_open_sets(s, p);
        CHECK(co.close.empty());
        CHECK(co.open == (s.in_subtree(p, b) ? std::vector<std::size_t>{b} : std::vector<std::size_t>{}));
    }
}

TEST_CASE("cycle path diagnostics") {
    for (auto name : kAccepted) {
        CAPTURE(name);
        auto reports = cycle_path_diagnostics(cycle_normal_form(proof(name)));
        CHECK_FALSE(reports.empty());
        CHECK(count_violations(reports, 1) == 0);
        CHECK(count_violations(reports, 2) == 0);
        if (classify(proof(name)).cls == ProofClass::CB) CHECK(count_violations(reports, 3) == 0);
    }
    CHECK(count_violations(cycle_path_diagnostics(cycle_normal_form(proof("E"))), 3) > 0);
}

TEST_CASE("minimize keeps semantics and shrinks duplicated proofs") {
    ProofGraph c = proof("C");
    ProofGraph twice = c;
    NodeId off = 100;
    for (const auto& [id, n] : c.nodes) {
        Node m = n;
        for (auto& p : m.premises) p += off;
        twice.nodes[id + off] = m;
    }
    twice.nodes.at(twice.root).premises[1] += off;
    ProofGraph m = minimize(twice);
    CHECK(m.nodes.size() <= c.nodes.size());
    for (int x = 0; x < 10; ++x)
        CHECK(eval_proof(m, {Value(x), Value(x + 3)}, {Value(5)}) == eval_proof(c, {Value(x), Value(x + 3)}, {Value(5)}));
}

TEST_CASE("box_promote: semantics and forbidden rules") {
    std::mt19937_64 rng(4);
    for (auto name : kEvaluable) {
        CAPTURE(name);
        ProofGraph g = proof(name);
        ProofGraph b = box_promote(g);
        CHECK(validate_graph(b).empty());
        auto census = rule_census(b);
        for (Rule r : {Rule::WeakN, Rule::ExchN, Rule::CutN, Rule::CondN}) CHECK(census.count(r) == 0);
        CHECK(b.at(b.root).seq.plain == 0);
        const Sequent& s = g.at(g.root).seq;
        for (int i = 0; i < 100; ++i) {
            Values x, y;
            sample(rng, s.boxed, s.plain, budget_for(name), 6, x, y);
            Values all = x;
            all.insert(all.end(), y.begin(), y.end());
            CHECK(eval_proof(b, all, {}) == eval_proof(g, x, y));
        }
        // every cycle still crosses a condB
        SccInfo scc = strongly_connected(b, [&](NodeId from, std::size_t) { return b.at(from).rule != Rule::CondBox; });
        for (bool cyc : scc.cyclic) CHECK_FALSE(cyc);
    }
    ProofGraph id = parse_proof("proof X root 1\nnode 1 : id seq N => N premises []\n");
    ProofGraph bid = box_promote(id);
    CHECK(bid.nodes.size() == 2);
    CHECK(bid.at(bid.root).rule == Rule::BoxL);
}

TEST_CASE("strip_safe_inputs: semantics on modal succedents") {
    std::mt19937_64 rng(6);
    // every cutB left premise in the corpus concludes a boxed succedent
    int seen = 0;
    for (auto name : kEvaluable) {
        ProofGraph g = proof(name);
        for (const auto& [id, n] : g.nodes) {
            if (n.rule != Rule::CutBox) continue;
            NodeId v = n.premises[0];
            ProofGraph h = g;
            NodeId star = strip_safe_inputs_into(h, v);
            const Sequent& s = g.at(v).seq;
            CHECK(h.at(star).seq == Sequent{s.boxed, 0, SType::Boxed});
            for (int i = 0; i < 50; ++i) {
                Values x, y;
                sample(rng, s.boxed, s.plain, 6, 6, x, y);
                CHECK(eval_proof(h, star, x, {}) == eval_proof(g, v, x, y));
            }
            ++seen;
        }
    }
    CHECK(seen > 0);
    // weakened safe inputs over a promoted root
    for (auto name : {"S", "P", "N"}) {
        ProofGraph g = proof(name);
        ProofGraph h = g;
        int k = g.at(g.root).seq.boxed;
        h.nodes[900] = Node{Rule::BoxR, 0, {}, {}, Sequent{k, 0, SType::Boxed}, {g.root}};
        h.nodes[901] = Node{Rule::WeakN, 0, {}, {}, Sequent{k, 1, SType::Boxed}, {900}};
        h.nodes[902] = Node{Rule::WeakN, 0, {}, {}, Sequent{k, 2, SType::Boxed}, {901}};
        h.root = 902;
        REQUIRE(validate_graph(h).empty());
        ProofGraph st = strip_safe_inputs(h);
        CHECK(st.at(st.root).seq == Sequent{k, 0, SType::Boxed});
        CHECK(classify(st).safe == classify(g).safe);
        CHECK(classify(st).left_leaning == classify(g).left_leaning);
        for (int x = 0; x < 30; ++x) CHECK(eval_proof(st, {Value(x)}, {}) == eval_proof(h, {Value(x)}, {7, 9}));
    }
}

TEST_CASE("strip_safe_inputs: a loop without boxR is rejected") {
    ProofGraph loop = parse_proof(
        "proof X root 1\nnode 1 : cutN seq bN, N => bN premises [3,2]\nnode 2 : wN seq bN, N, N => bN premises [1]\n"
        "node 3 : wB seq bN, N => N premises [4]\nnode 4 : id seq N => N premises []\n");
    REQUIRE(validate_graph(loop).empty());
    CHECK_THROWS_AS(strip_safe_inputs(loop), NotProgressing);
    ProofGraph bar = parse_proof(
        "proof X root 1\nnode 1 : wN seq bN, N => bN premises [2]\nnode 2 : boxR seq bN => bN premises [3]\n"
        "node 3 : wB seq bN => N premises [4]\nnode 4 : zero seq => N premises []\n");
    ProofGraph st = strip_safe_inputs(bar);
    CHECK(st.at(st.root).rule == Rule::BoxR);
    CHECK(st.nodes.size() == 3);
}


TEST_CASE("pass_parameters: semantics with the oracle's normals fixed") {
    for (const char* text : {kPassA, kPassB}) {
        ProofGraph g = parse_proof(text);
        REQUIRE(validate_graph(g, GraphKind::WithOracles).empty());
        ProofGraph star = pass_parameters(g, "a", "a*");
        CHECK(validate_graph(star, GraphKind::WithOracles).empty());
        int k = g.at(g.root).seq.boxed;
        bool found = false;
        for (const auto& [id, n] : star.nodes) {
            CHECK_FALSE((n.rule == Rule::Oracle && n.oracle == "a"));
            if (n.rule == Rule::Oracle && n.oracle == "a*") {
                found = true;
                CHECK(n.seq.boxed == k);
            }
        }
        CHECK(found);
        Classification before = classify(g), after = classify(star);
        CHECK(before.safe == after.safe);
        CHECK(before.left_leaning == after.left_leaning);
        CHECK(before.progressing == after.progressing);
        std::mt19937_64 rng(8);
        for (int i = 0; i < 50; ++i) {
            Values x, y;
            sample(rng, k, g.at(g.root).seq.plain, 8, 8, x, y);
            OracleEnv fixed{{"a", [&](const Values&, const Values& ys) { return pass_host(x, ys); }}};
            OracleEnv passed{{"a*", [](const Values& xs, const Values& ys) { return pass_host(xs, ys); }}};
            CHECK(eval_proof(star, star.root, x, y, {}, nullptr, &passed) == eval_proof(g, g.root, x, y, {}, nullptr, &fixed));
        }
    }
    ProofGraph a = pass_parameters(parse_proof(kPassA), "a", "a*");
    CHECK(a.nodes.size() == 1);
}

TEST_CASE("pass_parameters: cutB on an oracle path is a shape violation") {
    ProofGraph g = parse_proof(kPassCut);
    REQUIRE(validate_graph(g, GraphKind::WithOracles).empty());
    CHECK_THROWS_AS(pass_parameters(g, "a", "a*"), ShapeViolation);
}

TEST_CASE("pass_parameters: compiled nested recursion") {
    // each step of ex is compiled through parameter passing
    TermPtr ex = terms("NB.term").term("ex");
    ProofGraph g = nb_to_circular(ex, "ex");
    for (int x = 0; x < 6; ++x)
        for (int y = 0; y < 6; ++y) CHECK(eval_proof(g, {Value(x)}, {Value(y)}) == ex_golden(x, y));
}

namespace {

// mutual recursion: even(x) = 1 iff |x| is even, odd(x) = 1 - even(x)
TermPtr parity_step(const char* other, const char* base) {
    std::string text = std::string("term t = (comp-s 1 0 cond (pn 1 0 0) (const 1 0 ") + base + ")" +
                       " (comp-n 1 0 (call " + other + ") (comp-s 1 0 p (pn 1 0 0)))" +
                       " (comp-n 1 0 (call " + other + ") (comp-s 1 0 p (pn 1 0 0))))\n";
    return parse_terms("oracle e 1 0\noracle o 1 0\n" + text).term("t");
}

}  // namespace

TEST_CASE("reduce_simultaneous: rotation tags") {
    CHECK(rotation_tag(1, 1) == std::vector<int>{1});
    CHECK(rotation_tag(1, 3) == std::vector<int>{1, 2, 3});
    CHECK(rotation_tag(2, 3) == std::vector<int>{2, 3, 1});
    CHECK(rotation_tag(3, 3) == std::vector<int>{3, 1, 2});
}

TEST_CASE("reduce_simultaneous: selectors agree with the simultaneous definition") {
    std::vector<TermPtr> hs{parity_step("o", "1"), parity_step("e", "0")};
    for (Guard guard : {Guard::StrictNormals, Guard::StrictNormalsSubsetSafes}) {
        for (int sel = 0; sel < 2; ++sel) {
            TermPtr sim = simrec_pp(guard, sel, {"e", "o"}, hs);
            SimultaneousReduction r = reduce_simultaneous(sim);
            REQUIRE(r.selectors.size() == 2);
            CHECK(r.f->n == 2);
            for (int x = 0; x < 256; ++x) {
                Value want = (bin(Value(x)).size() % 2 == 0) == (sel == 0) ? 1 : 0;
                CHECK(eval_term(sim, {}, {Value(x)}, {}) == want);
                CHECK(eval_term(r.selectors[static_cast<std::size_t>(sel)], {}, {Value(x)}, {}) == want);
            }
            // tags that are not rotations select nothing
            CHECK(eval_term(r.f, {}, {Value(5)}, {1, 1}) == 0);
            CHECK(eval_term(r.f, {}, {Value(5)}, {0, 7}) == 0);
        }
    }
    TermPtr single = simrec_pp(Guard::StrictNormals, 0, {"e"}, {parity_step("e", "1")});
    SimultaneousReduction one = reduce_simultaneous(single);
    REQUIRE(one.tags.size() == 1);
    CHECK(one.tags[0] == std::vector<int>{1});
    for (int x = 0; x < 64; ++x) CHECK(eval_term(one.selectors[0], {}, {Value(x)}, {}) == eval_term(single, {}, {Value(x)}, {}));
}

TEST_CASE("reduce_simultaneous: exhaustive small inputs with two normals") {
    // f1(x,z;) steps on x and swaps to f2, f2 returns z at the end
    auto step = [](const char* other, const char* base) {
        std::string text = std::string("term t = (comp-s 2 0 cond (pn 2 0 0) ") + base +
                           " (comp-n 2 0 (call " + other + ") (comp-s 2 0 p (pn 2 0 0)) (pn 2 0 1))" +
                           " (comp-s 2 0 s1 (comp-n 2 0 (call " + other + ") (comp-s 2 0 p (pn 2 0 0)) (pn 2 0 1))))\n";
        return parse_terms("oracle a 2 0\noracle b 2 0\n" + text).term("t");
    };
    std::vector<TermPtr> hs{step("b", "(pn 2 0 1)"), step("a", "(zero 2 0)")};
    for (int sel = 0; sel < 2; ++sel) {
        TermPtr sim = simrec_pp(Guard::StrictNormals, sel, {"a", "b"}, hs);
        SimultaneousReduction r = reduce_simultaneous(sim);
        for (int x = 0; x < 64; ++x)
            for (int z = 0; z < 64; ++z) {
                if (bin(Value(x)).size() + bin(Value(z)).size() > 6) continue;
                CHECK(eval_term(r.selectors[static_cast<std::size_t>(sel)], {}, {Value(x), Value(z)}, {}) ==
                      eval_term(sim, {}, {Value(x), Value(z)}, {}));
            }
    }
}

TEST_CASE("box_promote rejects oracle leaves") {
    CHECK_THROWS_AS(box_promote(parse_proof(kPassA)), TransformError);
}
