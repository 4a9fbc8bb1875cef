#pragma once

#include "vrhr/system.hpp"
#include "vrhr/translate.hpp"

namespace vrhr::testing {

// Process types of the worked examples: Once (one shot sender), Loop
// (receive/handle cycle) and P (two-way toggle with observable up/dn).
inline ProcessType once_type() {
    return make_process_type("Once", {"on", "off"}, "on", {{"send", "on", "off", true}});
}

inline ProcessType loop_type() {
    return make_process_type("Loop", {"free", "busy"}, "free",
                             {{"recv", "free", "busy", true}, {"handle", "busy", "free", false}});
}

inline ProcessType toggle_type() {
    return make_process_type("P", {"lo", "hi"}, "lo",
                             {{"up", "lo", "hi", true}, {"dn", "hi", "lo", true}});
}

// Ports: p of Once, q of Loop (the bipartite examples), a/b of P (chains).
inline TypeTable example_table() {
    TypeTable t;
    t.types = {once_type(), loop_type(), toggle_type()};
    for (const auto& p : t.types)
        t.alphabet.process_types.insert(p.name);
    t.alphabet.port_type = {{"p", "Once"}, {"p2", "Once"}, {"p3", "Once"}, {"q", "Loop"},
                            {"q2", "Loop"}, {"a", "P"},    {"b", "P"}};
    return t;
}

// relab[](add_edge[(send,recv); p -> q](union tree of n p-vertices and m
// q-vertices)); with plain label "a" this is the complete bipartite example.
inline TermPtr knm_term(int n, int m, const EdgeLabel& label = make_pair_label("send", "recv")) {
    TermPtr left, right;
    for (int i = 0; i < n; ++i) {
        TermPtr v = mk_vertex("p");
        left = left ? mk_union(left, v) : v;
    }
    for (int j = 0; j < m; ++j) {
        TermPtr v = mk_vertex("q");
        right = right ? mk_union(right, v) : v;
    }
    TermPtr body = left && right ? mk_union(left, right) : (left ? left : right);
    return mk_relab({}, mk_add_edge(label, "p", "q", body));
}

} // namespace vrhr::testing
