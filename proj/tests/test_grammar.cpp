#include "doctest.h"

#include "test_util.hpp"
#include "vrhr/grammar.hpp"

using namespace vrhr;
using namespace vrhr::testing;

namespace {

// The worked grammar: S -> relab[](add_edge[(send,recv); p -> q](K));
// K -> vertex[p] | vertex[q] | union(K, K).
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

} // namespace

TEST_CASE("grammar validation") {
    auto t = example_table();
    Grammar g = knm_grammar();
    CHECK(g.validate(t.alphabet).ok());

    Grammar no_axiom = g;
    no_axiom.axioms.clear();
    CHECK_FALSE(no_axiom.validate(t.alphabet).ok());

    Grammar bad_ref = g;
    bad_ref.rules.push_back({"K", mk_nonterminal("Z")});
    CHECK_FALSE(bad_ref.validate(t.alphabet).ok());
}

TEST_CASE("apply_step replaces a single occurrence") {
    Grammar g = knm_grammar();
    TermPtr s = mk_nonterminal("S");
    TermPtr t1 = apply_step(s, g.rules[0], 0);
    CHECK(print_term(t1) == "relab[](add_edge[(send,recv); p -> q](K))");

    TermPtr t2 = apply_step(t1, g.rules[3], 0);
    CHECK(print_term(t2) == "relab[](add_edge[(send,recv); p -> q](union(K, K)))");

    TermPtr t3 = apply_step(t2, g.rules[1], 0);
    CHECK(print_term(t3) == "relab[](add_edge[(send,recv); p -> q](union(vertex[p], K)))");

    SUBCASE("lhs mismatch is an error") {
        CHECK_THROWS(apply_step(t2, g.rules[0], 0)); // S-rule at a K occurrence
    }
    SUBCASE("position out of range") {
        CHECK_THROWS(apply_step(t2, g.rules[1], 2));
    }
}

TEST_CASE("derivation replay reproduces the term") {
    Grammar g = knm_grammar();
    Derivation d{"S", {{0, 0}, {3, 0}, {1, 0}, {2, 0}}};
    TermPtr t = replay_derivation(g, d);
    CHECK(print_term(t) ==
          "relab[](add_edge[(send,recv); p -> q](union(vertex[p], vertex[q])))");
    CHECK(is_ground(t));
}

TEST_CASE("enumeration of the worked grammar within 6 steps") {
    auto t = example_table();
    Grammar g = knm_grammar();
    EnumBounds bounds;
    bounds.max_steps = 6;
    bounds.max_vertices = 8;
    EnumOutcome outcome;
    auto items = enumerate_all(g, t.alphabet, bounds, &outcome);
    CHECK(outcome.exhausted);

    // Hand-replayed expectations: within 6 steps the derivations reach
    // exactly the union trees with at most 3 leaves.
    auto count_shape = [&](int once, int loop, size_t edges) {
        int found = 0;
        for (const auto& it : items) {
            int n_once = 0, n_loop = 0;
            for (Vertex v = 0; v < it.graph.vertex_count; ++v) {
                n_once += it.graph.labels[v].count("Once");
                n_loop += it.graph.labels[v].count("Loop");
            }
            if (n_once == once && n_loop == loop && it.graph.edges.size() == edges)
                found++;
        }
        return found;
    };
    CHECK(count_shape(1, 0, 0) == 1); // single sender
    CHECK(count_shape(0, 1, 0) == 1); // single receiver
    CHECK(count_shape(1, 1, 1) == 1);
    CHECK(count_shape(2, 1, 2) == 1); // the 2x1 bipartite instance
    CHECK(count_shape(1, 2, 2) == 1);
    CHECK(count_shape(2, 0, 0) == 1); // one-sided graphs are in the language
    CHECK(count_shape(3, 0, 0) == 1);
    // 4-leaf trees need 8 steps, so they are absent.
    CHECK(count_shape(2, 2, 4) == 0);

    SUBCASE("every yielded derivation replays to an isomorphic graph") {
        for (const auto& it : items) {
            TermPtr term = replay_derivation(g, it.derivation);
            CHECK(term_equal(term, it.term));
            CHECK(isomorphic(eval_vr(term, t.alphabet), it.graph));
        }
    }
}

TEST_CASE("a single-production grammar yields exactly one graph") {
    auto t = example_table();
    Grammar g;
    g.algebra = Algebra::VR;
    g.nonterminals = {"X"};
    g.axioms = {"X"};
    g.rules = {{"X", mk_vertex("p")}};
    auto items = enumerate_all(g, t.alphabet, EnumBounds{}, nullptr);
    REQUIRE(items.size() == 1);
    CHECK(items[0].graph.vertex_count == 1);
}

TEST_CASE("enumeration is monotone in max_steps") {
    auto t = example_table();
    Grammar g = knm_grammar();
    EnumBounds small{4, 8, SIZE_MAX, 1u << 20};
    EnumBounds large{6, 8, SIZE_MAX, 1u << 20};
    auto a = enumerate_all(g, t.alphabet, small, nullptr);
    auto b = enumerate_all(g, t.alphabet, large, nullptr);
    CHECK(a.size() <= b.size());
    for (const auto& ia : a) {
        bool found = false;
        for (const auto& ib : b)
            found = found || isomorphic(ia.graph, ib.graph);
        CHECK(found);
    }
}

TEST_CASE("bound hits are reported, not silent") {
    auto t = example_table();
    Grammar g = knm_grammar();
    EnumBounds bounds;
    bounds.max_steps = 6;
    bounds.max_graphs = 2;
    EnumOutcome outcome;
    auto items = enumerate_all(g, t.alphabet, bounds, &outcome);
    CHECK(items.size() == 2);
    CHECK_FALSE(outcome.exhausted);
    CHECK(outcome.truncation_reason.find("max_graphs") != std::string::npos);
}

TEST_CASE("the vertex bound prunes large graphs") {
    auto t = example_table();
    Grammar g = knm_grammar();
    EnumBounds bounds;
    bounds.max_steps = 10;
    bounds.max_vertices = 2;
    auto items = enumerate_all(g, t.alphabet, bounds, nullptr);
    for (const auto& it : items)
        CHECK(it.graph.vertex_count <= 2);
}
