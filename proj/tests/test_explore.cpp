#include "doctest.h"

#include <functional>

#include "test_util.hpp"
#include "vrhr/explore.hpp"

using namespace vrhr;
using namespace vrhr::testing;

namespace {

Grammar knm_grammar() {
    Grammar g;
    g.algebra = Algebra::VR;
    g.nonterminals = {"K", "S"};
    g.axioms = {"S"};
    g.rules = {
        {"S", mk_relab({}, mk_add_edge(make_pair_label("send", "recv"), "p", "q",
                                       mk_nonterminal("K")))},
        {"K", mk_vertex("p")},
        {"K", mk_vertex("q")},
        {"K", mk_union(mk_nonterminal("K"), mk_nonterminal("K"))},
    };
    return g;
}

// Independent oracle: recursive fixpoint over full markings driven by the
// generic Petri net view, not the compact search.
size_t oracle_reachable_count(const BehaviorNet& b, const TypeTable& t) {
    PetriNet n = b.to_petri(t);
    std::set<Marking> seen;
    std::function<void(const Marking&)> go = [&](const Marking& m) {
        if (!seen.insert(m).second)
            return;
        for (size_t tr = 0; tr < n.transitions.size(); ++tr)
            if (enabled(n, m, (int)tr))
                go(fire(n, m, (int)tr));
    };
    go(n.initial);
    return seen.size();
}

FormulaPtr gap_formula() { // y >= x + 2
    return f_cmp(Formula::CmpOp::Ge, f_var("y"), f_add(f_var("x"), f_const(2)));
}

const PlaceLabeling kLabeling = {{"on", "x"}, {"off", "y"}};
const std::vector<std::string> kVars = {"x", "y"};

BehaviorNet behavior_of(const TermPtr& theta, const TypeTable& t) {
    return build_behavior(System::from_graph(eval_vr(theta, t.alphabet), t), t);
}

} // namespace

TEST_CASE("the 1x1 instance has exactly the three hand-enumerated states") {
    auto t = example_table();
    BehaviorNet b = behavior_of(knm_term(1, 1), t);
    ExploreResult r = explore(b, 1000);
    REQUIRE(r.exhaustive);
    CHECK(r.states.size() == 3); // (on,free), (off,busy), (off,free)
    CHECK(oracle_reachable_count(b, t) == 3);
}

TEST_CASE("a behavior without transitions only reaches its initial marking") {
    auto t = example_table();
    LabeledGraph g;
    g.add_vertex({"Once"});
    BehaviorNet b = build_behavior(System::from_graph(g, t), t);
    ExploreResult r = explore(b, 1000);
    CHECK(r.states.size() == 1);
    CHECK(r.exhaustive);
}

TEST_CASE("the 4x3 instance explores exhaustively below 128 states") {
    auto t = example_table();
    BehaviorNet b = behavior_of(knm_term(4, 3), t);
    ExploreResult r = explore(b, 100000);
    REQUIRE(r.exhaustive);
    CHECK(r.states.size() <= 128);
    CHECK(r.states.size() == oracle_reachable_count(b, t));
    // Frozen from the oracle: pairs (senders done, receivers busy) with
    // busy <= done, summed over label-respecting subsets.
    CHECK(r.states.size() == 99);
}

TEST_CASE("exploration matches the oracle on several small systems") {
    auto t = example_table();
    for (auto [n, m] : {std::pair{2, 1}, {2, 2}, {3, 2}}) {
        BehaviorNet b = behavior_of(knm_term(n, m), t);
        ExploreResult r = explore(b, 100000);
        REQUIRE(r.exhaustive);
        CHECK(r.states.size() == oracle_reachable_count(b, t));
    }
}

TEST_CASE("truncation is a reported status") {
    auto t = example_table();
    BehaviorNet b = behavior_of(knm_term(4, 3), t);
    ExploreResult r = explore(b, 10);
    CHECK_FALSE(r.exhaustive);
    CHECK(r.states.size() <= 10);
}

TEST_CASE("valuations count tokens per variable") {
    auto t = example_table();
    BehaviorNet b = behavior_of(knm_term(4, 3), t);
    auto lifted = lift_labeling(b, t, kLabeling, kVars);
    Valuation v0 = valuation_of(b, lifted, kVars, b.initial);
    CHECK(v0 == Valuation{{"x", 4}, {"y", 0}});

    // March one sender to off by hand: fire the first rendezvous.
    for (size_t tr = 0; tr < b.transitions.size(); ++tr) {
        if (b.transitions[tr].origin == BehaviorTransition::Origin::Rendezvous) {
            State s = b.fire_in(b.initial, b.transitions[tr]);
            CHECK(valuation_of(b, lifted, kVars, s) == Valuation{{"x", 3}, {"y", 1}});
            break;
        }
    }

    // An empty labeling reads every declared variable as zero.
    auto none = lift_labeling(b, t, {}, kVars);
    CHECK(valuation_of(b, none, kVars, b.initial) == Valuation{{"x", 0}, {"y", 0}});
}

TEST_CASE("reachability of the worked formula on the 4x3 instance") {
    auto t = example_table();
    BehaviorNet b = behavior_of(knm_term(4, 3), t);
    auto lifted = lift_labeling(b, t, kLabeling, kVars);
    ReachVerdict v = check_reachability(b, lifted, kVars, gap_formula(), 100000);
    REQUIRE(v.status == ReachVerdict::Status::Sat);
    // Three senders must finish before y >= x + 2 holds on 4+3; each
    // rendezvous is a single behavior transition, so the shortest witness
    // has three firings.
    CHECK(v.witness.size() == 3);
    CHECK(v.valuation == Valuation{{"x", 1}, {"y", 3}});
    // Replay the witness on the compact encoding.
    State s = b.initial;
    for (int tr : v.witness) {
        REQUIRE(b.enabled_in(s, b.transitions[tr]));
        s = b.fire_in(s, b.transitions[tr]);
    }
    CHECK(s == v.final_state);
}

TEST_CASE("the 1x1 instance cannot reach the gap") {
    auto t = example_table();
    BehaviorNet b = behavior_of(knm_term(1, 1), t);
    auto lifted = lift_labeling(b, t, kLabeling, kVars);
    ReachVerdict v = check_reachability(b, lifted, kVars, gap_formula(), 100000);
    CHECK(v.status == ReachVerdict::Status::UnsatWithinBound);
}

TEST_CASE("an unsatisfiable formula is UNSAT on an exhaustively explored net") {
    auto t = example_table();
    BehaviorNet b = behavior_of(knm_term(2, 2), t);
    auto lifted = lift_labeling(b, t, kLabeling, kVars);
    FormulaPtr contra = f_cmp(Formula::CmpOp::Eq, f_const(0), f_const(1));
    ReachVerdict v = check_reachability(b, lifted, kVars, contra, 100000);
    CHECK(v.status == ReachVerdict::Status::UnsatWithinBound);
}

TEST_CASE("witness length equals the BFS depth of the first satisfying marking") {
    auto t = example_table();
    BehaviorNet b = behavior_of(knm_term(3, 2), t);
    auto lifted = lift_labeling(b, t, kLabeling, kVars);
    // y >= 1 is first reached after a single rendezvous.
    FormulaPtr f = f_cmp(Formula::CmpOp::Ge, f_var("y"), f_const(1));
    ReachVerdict v = check_reachability(b, lifted, kVars, f, 100000);
    REQUIRE(v.status == ReachVerdict::Status::Sat);
    CHECK(v.witness.size() == 1);
}

TEST_CASE("the parametric reachability driver finds the 2x1 witness") {
    auto t = example_table();
    PrpBounds bounds{6, 8, 100000};
    PrpResult r = solve_prp(knm_grammar(), t, kLabeling, gap_formula(), bounds);
    REQUIRE(r.status == PrpResult::Status::Positive);
    REQUIRE(r.witness.has_value());
    const PrpWitness& w = *r.witness;
    CHECK(w.system.graph.vertex_count == 3);
    int once = 0, loop = 0;
    for (Vertex v = 0; v < w.system.graph.vertex_count; ++v) {
        once += w.system.proc[v] == "Once";
        loop += w.system.proc[v] == "Loop";
    }
    CHECK(once == 2);
    CHECK(loop == 1);
    CHECK(w.system.graph.edges.size() == 2);
    CHECK(w.valuation == Valuation{{"x", 0}, {"y", 2}});

    SUBCASE("the witness replays from scratch") {
        TermPtr term = replay_derivation(knm_grammar(), w.derivation);
        CHECK(term_equal(term, w.term));
        BehaviorNet b = build_behavior(System::from_graph(eval_vr(term, t.alphabet), t), t);
        State s = b.initial;
        for (int tr : w.firing) {
            REQUIRE(b.enabled_in(s, b.transitions[tr]));
            s = b.fire_in(s, b.transitions[tr]);
        }
        auto lifted = lift_labeling(b, t, kLabeling, kVars);
        Valuation val = valuation_of(b, lifted, kVars, s);
        CHECK(val == w.valuation);
        CHECK(eval_formula(gap_formula(), val));
    }

    SUBCASE("positive results are monotone in the bounds") {
        PrpBounds wider{8, 10, 1000000};
        PrpResult r2 = solve_prp(knm_grammar(), t, kLabeling, gap_formula(), wider);
        CHECK(r2.status == PrpResult::Status::Positive);
    }
}

TEST_CASE("an unreachable gap is negative up to the bound") {
    auto t = example_table();
    // y <= #Once <= 4 under max_vertices 5, so y >= x + 10 cannot hold.
    FormulaPtr f = f_cmp(Formula::CmpOp::Ge, f_var("y"), f_add(f_var("x"), f_const(10)));
    PrpBounds bounds{6, 5, 100000};
    PrpResult r = solve_prp(knm_grammar(), t, kLabeling, f, bounds);
    CHECK(r.status == PrpResult::Status::NegativeWithinBound);
    CHECK(r.systems_checked > 0);
}

TEST_CASE("a grammar with an empty in-bounds language answers negative") {
    auto t = example_table();
    Grammar g;
    g.algebra = Algebra::VR;
    g.nonterminals = {"X"};
    g.axioms = {"X"};
    g.rules = {{"X", mk_union(mk_nonterminal("X"), mk_nonterminal("X"))}}; // no base case
    PrpResult r = solve_prp(g, t, kLabeling, gap_formula(), PrpBounds{4, 8, 1000});
    CHECK(r.status == PrpResult::Status::NegativeWithinBound);
    CHECK(r.systems_checked == 0);
}

TEST_CASE("state-space truncation propagates into the verdict") {
    auto t = example_table();
    PrpResult r = solve_prp(knm_grammar(), t, kLabeling, gap_formula(), PrpBounds{6, 8, 2});
    CHECK(r.status == PrpResult::Status::Truncated);
}
