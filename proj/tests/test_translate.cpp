#include "doctest.h"

#include "test_util.hpp"
#include "vrhr/equivalence.hpp"
#include "vrhr/grammar.hpp"
#include "vrhr/translate.hpp"

using namespace vrhr;
using namespace vrhr::testing;
namespace en = vrhr::enc_names;

TEST_CASE("halving the two-way toggle") {
    ProcessType h = halve(toggle_type());
    CHECK(h.name == "half_P");
    CHECK(h.net.places ==
          std::vector<std::string>{"lo", "hi", "pend_up", "pend_dn"});
    CHECK(h.net.transitions ==
          std::vector<std::string>{"req_up", "fin_up", "req_dn", "fin_dn"});
    CHECK(h.observable ==
          std::set<std::string>{"req_up", "fin_up", "req_dn", "fin_dn"});
    CHECK(validate_process_type(h).ok());
    // req_up: lo -> pend_up, fin_up: pend_up -> hi.
    int req = *h.net.transition_index("req_up");
    CHECK(h.net.places[h.pre_place(req)] == "lo");
    CHECK(h.net.places[h.post_place(req)] == "pend_up");
    int fin = *h.net.transition_index("fin_up");
    CHECK(h.net.places[h.pre_place(fin)] == "pend_up");
    CHECK(h.net.places[h.post_place(fin)] == "hi");
    CHECK(h.net.initial[*h.net.place_index("lo")] == 1);
}

TEST_CASE("halving counts: |places| and |transitions|") {
    for (const auto& p : {once_type(), loop_type(), toggle_type()}) {
        ProcessType h = halve(p);
        size_t obs = p.observable.size();
        size_t internal = p.net.transitions.size() - obs;
        CHECK(h.net.places.size() == p.net.places.size() + obs);
        CHECK(h.net.transitions.size() == internal + 2 * obs);
    }
}

TEST_CASE("halving the one-shot sender") {
    ProcessType h = halve(once_type());
    CHECK(h.net.places == std::vector<std::string>{"on", "off", "pend_send"});
    CHECK(h.net.transitions == std::vector<std::string>{"req_send", "fin_send"});
}

TEST_CASE("halving keeps internal transitions verbatim") {
    ProcessType h = halve(loop_type());
    REQUIRE(h.net.transition_index("handle").has_value());
    CHECK_FALSE(h.observable.count("handle"));
    int handle = *h.net.transition_index("handle");
    CHECK(h.net.places[h.pre_place(handle)] == "busy");
    CHECK(h.net.places[h.post_place(handle)] == "free");
}

TEST_CASE("a type without observable transitions halves to itself") {
    ProcessType p = make_process_type("Clock", {"tick", "tock"}, "tick",
                                      {{"step", "tick", "tock", false},
                                       {"back", "tock", "tick", false}});
    ProcessType h = halve(p);
    CHECK(h.net.places == p.net.places);
    CHECK(h.net.transitions == p.net.transitions);
    CHECK(h.observable.empty());
}

TEST_CASE("the relay process") {
    ProcessType r = make_router("send");
    CHECK(r.name == "eps_send");
    CHECK(r.net.places.size() == 4);
    CHECK(r.net.transitions.size() == 5);
    CHECK(r.observable.size() == 5);
    CHECK(validate_process_type(r).ok());
    CHECK(r.net.initial[*r.net.place_index("idle_send")] == 1);
    int t = *r.net.transition_index("send");
    CHECK(r.net.places[r.pre_place(t)] == "active_send");
    CHECK(r.net.places[r.post_place(t)] == "reply_send");

    ProcessType r2 = make_router("recv");
    for (const auto& q : r2.net.places)
        CHECK_FALSE(r.net.place_index(q).has_value()); // disjoint place identities
}

TEST_CASE("the routed type table") {
    auto t = example_table();
    ExpandedAlphabet exp = expand_type_table(t);
    CHECK(exp.table.types.size() == 3 + 4); // halves + routers for send,recv,up,dn
    CHECK(exp.table.validate().ok());
    CHECK(exp.half_base.at("half_Once") == "Once");
    CHECK(exp.router_transition.at("eps_up") == "up");
    // Ports: half_pi plus a representative and a copy per (pi, t).
    CHECK(exp.table.alphabet.port_type.at("half_p") == "half_Once");
    CHECK(exp.table.alphabet.port_type.at("rep_p_send") == "eps_send");
    CHECK(exp.table.alphabet.port_type.at("new_a_dn") == "eps_dn");
    // Forward/backward pairing.
    CHECK(exp.epsilon.forward_to_backward.at(en::request_label("send")) ==
          en::commit_label("send"));
    CHECK(exp.epsilon.forward_to_backward.at(en::forward_label("up")) == en::ack_label("up"));
}

TEST_CASE("enc of the empty map is the identity of composition") {
    auto t = example_table();
    CHECK(enc({}, t) == nullptr);
}

TEST_CASE("enc wires old representatives to fresh copies") {
    auto t = example_table();
    ExpandedAlphabet exp = expand_type_table(t);
    TermPtr e = enc({{"p", "p2"}}, t);
    REQUIRE(e);
    LabeledGraph g = eval_hr(e, exp.table.alphabet);
    CHECK(g.vertex_count == 2);
    CHECK(g.edges.size() == 2);
    CHECK(g.has_edge(0, en::forward_label("send"), 1));
    CHECK(g.has_edge(1, en::ack_label("send"), 0));
    CHECK(g.sort_of(exp.table.alphabet) == PortSet{"rep_p_send", "new_p2_send"});
}

TEST_CASE("enc of a non-injective map fuses the common copy") {
    auto t = example_table();
    ExpandedAlphabet exp = expand_type_table(t);
    TermPtr e = enc({{"p", "p3"}, {"p2", "p3"}}, t);
    REQUIRE(e);
    LabeledGraph g = eval_hr(e, exp.table.alphabet);
    // Both old representatives wire into a single fused new_p3_send vertex.
    CHECK(g.vertex_count == 3);
    CHECK(g.edges.size() == 4);
    int with_new = 0;
    for (Vertex v = 0; v < g.vertex_count; ++v)
        with_new += g.labels[v].count("new_p3_send");
    CHECK(with_new == 1);
}

TEST_CASE("enc covers every observable of the port's type") {
    auto t = example_table();
    ExpandedAlphabet exp = expand_type_table(t);
    TermPtr e = enc({{"a", "b"}}, t); // P has two observables
    LabeledGraph g = eval_hr(e, exp.table.alphabet);
    CHECK(g.vertex_count == 4); // (a,up)->(b,up) and (a,dn)->(b,dn) bundles
    CHECK(g.edges.size() == 4);
}

TEST_CASE("expanding a single vertex yields the vertex-plus-router star") {
    auto t = example_table();
    ExpandedAlphabet exp = expand_type_table(t);

    SUBCASE("one observable") {
        TermPtr theta = expand_term(mk_vertex("p"), t);
        LabeledGraph g = eval_hr(theta, exp.table.alphabet);
        CHECK(g.vertex_count == 2);
        CHECK(g.edges.size() == 2);
        CHECK(g.has_edge(0, en::request_label("send"), 1));
        CHECK(g.has_edge(1, en::commit_label("send"), 0));
        CHECK(g.sort_of(exp.table.alphabet) == PortSet{"rep_p_send"});
        // The half port is consumed internally and never escapes.
        for (Vertex v = 0; v < g.vertex_count; ++v)
            CHECK_FALSE(g.labels[v].count("half_p"));
    }
    SUBCASE("two observables") {
        TermPtr theta = expand_term(mk_vertex("a"), t);
        LabeledGraph g = eval_hr(theta, exp.table.alphabet);
        CHECK(g.vertex_count == 3); // leaf + one router per transition
        CHECK(g.edges.size() == 4);
        CHECK(g.sort_of(exp.table.alphabet) == PortSet{"rep_a_up", "rep_a_dn"});
    }
}

TEST_CASE("expanding an empty relabeling demotes every representative") {
    auto t = example_table();
    ExpandedAlphabet exp = expand_type_table(t);
    TermPtr theta = expand_term(mk_relab({}, mk_vertex("p")), t);
    LabeledGraph g = eval_hr(theta, exp.table.alphabet);
    CHECK(g.sort_of(exp.table.alphabet).empty());
    CHECK(g.vertex_count == 2); // structure unchanged, labels gone
}

TEST_CASE("sort correspondence of the translation") {
    auto t = example_table();
    ExpandedAlphabet exp = expand_type_table(t);
    std::vector<TermPtr> terms = {
        mk_vertex("a"),
        mk_union(mk_vertex("p"), mk_vertex("q")),
        mk_union(mk_vertex("p"), mk_vertex("p")),
        mk_relab({{"p", "p2"}}, mk_vertex("p")),
        mk_add_edge(make_pair_label("send", "recv"), "p", "q",
                    mk_union(mk_vertex("p"), mk_vertex("q"))),
        knm_term(2, 2),
    };
    for (const auto& theta : terms) {
        PortSet want;
        for (const auto& pi : infer_sort(theta, t.alphabet)) {
            const ProcessType& p = t.type(t.alphabet.port_type.at(pi));
            for (const auto& tr : p.observable)
                want.insert(en::rep_port(pi, tr));
        }
        LabeledGraph g = eval_hr(expand_term(theta, t), exp.table.alphabet);
        CHECK(g.sort_of(exp.table.alphabet) == want);
    }
}

TEST_CASE("expansion correspondence on the worked instances") {
    auto t = example_table();
    CHECK(check_expansion_correspondence(mk_vertex("p"), t).ok());
    CHECK(check_expansion_correspondence(mk_union(mk_vertex("p"), mk_vertex("p")), t).ok());
    CHECK(check_expansion_correspondence(knm_term(1, 1), t).ok());
    CHECK(check_expansion_correspondence(knm_term(2, 1), t).ok());
    CHECK(check_expansion_correspondence(knm_term(4, 3), t).ok());
    // Non-injective relabeling over a shared-port union.
    TermPtr merge = mk_relab({{"p", "p3"}, {"p2", "p3"}},
                             mk_union(mk_vertex("p"), mk_vertex("p2")));
    CHECK(check_expansion_correspondence(merge, t).ok());
    // Chains through repeated self-relabelings.
    TermPtr chain = mk_relab({{"a", "a"}}, mk_relab({{"a", "a"}}, mk_vertex("a")));
    CHECK(check_expansion_correspondence(chain, t).ok());
    // An add-edge whose port has no representative is a no-op on both sides.
    TermPtr dangling =
        mk_add_edge(make_pair_label("send", "recv"), "p", "q", mk_vertex("p"));
    CHECK(check_expansion_correspondence(dangling, t).ok());
}

TEST_CASE("the union case refreshes shared representatives only") {
    auto t = example_table();
    ExpandedAlphabet exp = expand_type_table(t);
    // Shared port p, private ports q (left) and p2 (right).
    TermPtr left = mk_union(mk_vertex("p"), mk_vertex("q"));
    TermPtr right = mk_union(mk_vertex("p"), mk_vertex("p2"));
    TermPtr theta = mk_union(left, right);
    LabeledGraph g = eval_hr(expand_term(theta, t), exp.table.alphabet);
    CHECK(g.sort_of(exp.table.alphabet) ==
          PortSet{"rep_p_send", "rep_q_recv", "rep_p2_send"});
    // Both p-leaves route into one shared representative.
    Vertex rep = -1;
    for (Vertex v = 0; v < g.vertex_count; ++v)
        if (g.labels[v].count("rep_p_send"))
            rep = v;
    REQUIRE(rep >= 0);
    int eps_in = 0;
    for (const auto& e : g.edges)
        if (e.dst == rep && exp.epsilon.is_forward(e.label))
            eps_in++;
    CHECK(eps_in == 2); // one forward edge per side's old representative
    CHECK(check_expansion_correspondence(theta, t).ok());
}

TEST_CASE("lifting the place labeling") {
    auto t = example_table();
    PlaceLabeling l = {{"on", "x"}, {"off", "y"}};
    PlaceLabeling le = lift_variable_labeling(l, t);
    CHECK(le.at("on") == "x");
    CHECK(le.at("off") == "y");
    CHECK(le.at("active_send") == "x"); // pre(send) = on
    CHECK(le.at("reply_send") == "y");  // post(send) = off
    CHECK_FALSE(le.count("pend_send"));
    CHECK_FALSE(le.count("idle_send"));
    CHECK_FALSE(le.count("wait_send"));
    CHECK_FALSE(le.count("active_recv")); // free is unlabeled
}

TEST_CASE("edge trichotomy flags forbidden shapes") {
    auto t = example_table();
    ExpandedAlphabet exp = expand_type_table(t);

    LabeledGraph good = eval_hr(expand_term(knm_term(2, 1), t), exp.table.alphabet);
    System s = System::from_graph(good, exp.table);
    CHECK(check_edge_trichotomy(s, exp).ok());

    // A half-to-half edge matches none of the three shapes.
    LabeledGraph bad;
    Vertex u = bad.add_vertex({"half_Once"});
    Vertex v = bad.add_vertex({"half_Once"});
    bad.add_edge(u, make_pair_label("req_send", "req_send"), v);
    System sb = System::from_graph(bad, exp.table);
    CHECK_FALSE(check_edge_trichotomy(sb, exp).ok());

    // A lone attempt edge without its commit pair is flagged too.
    LabeledGraph half;
    u = half.add_vertex({"half_Once"});
    v = half.add_vertex({"eps_send"});
    half.add_edge(u, en::request_label("send"), v);
    System sh = System::from_graph(half, exp.table);
    CHECK_FALSE(check_edge_trichotomy(sh, exp).ok());
}

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

} // namespace

TEST_CASE("grammar translation: sorts, rules and axioms") {
    auto t = example_table();
    Grammar g = knm_grammar();
    TranslatedGrammar tg = translate_grammar(g, t);
    CHECK(tg.grammar.algebra == Algebra::HR);
    // K derives {p}, {q} and {p,q}; S always derives the empty sort.
    CHECK(tg.nt_sorts.at("K").size() == 3);
    CHECK(tg.nt_sorts.at("S").size() == 1);
    CHECK(tg.nt_sorts.at("S")[0].empty());
    CHECK(tg.grammar.axioms.size() == 1);
    ValidationReport rep = tg.grammar.validate(expand_type_table(t).table.alphabet);
    CHECK(rep.ok());
}

TEST_CASE("grammar translation commutes with term translation") {
    auto t = example_table();
    Grammar g = knm_grammar();
    TranslatedGrammar tg = translate_grammar(g, t);

    EnumBounds bounds;
    bounds.max_steps = 6;
    bounds.max_vertices = 8;
    auto items = enumerate_all(g, t.alphabet, bounds, nullptr);
    REQUIRE(items.size() > 3);
    for (const auto& it : items) {
        Derivation d2 = translate_derivation(g, t, tg, it.derivation);
        TermPtr via_grammar = replay_derivation(tg.grammar, d2);
        TermPtr via_term = expand_term(it.term, t);
        CHECK(term_equal(via_grammar, via_term));
        CHECK(is_ground(via_grammar));
    }
}

TEST_CASE("a vertex-only grammar translates to router stars") {
    auto t = example_table();
    Grammar g;
    g.algebra = Algebra::VR;
    g.nonterminals = {"X"};
    g.axioms = {"X"};
    g.rules = {{"X", mk_vertex("p")}};
    TranslatedGrammar tg = translate_grammar(g, t);
    REQUIRE(tg.grammar.rules.size() == 1);
    CHECK(term_equal(tg.grammar.rules[0].rhs, expand_term(mk_vertex("p"), t)));

    ExpandedAlphabet exp = expand_type_table(t);
    auto items = enumerate_all(tg.grammar, exp.table.alphabet, EnumBounds{}, nullptr);
    REQUIRE(items.size() == 1);
    CHECK(items[0].graph.vertex_count == 2); // leaf plus its send router
}
