#include "vrhr/frontend.hpp"

#include <algorithm>
#include <sstream>

namespace vrhr {

Json derivation_to_json(const Derivation& d) {
    Json steps = Json::array();
    for (const auto& s : d.steps)
        steps.push_back(Json{{"rule", s.rule}, {"position", s.position}});
    return Json{{"axiom", d.axiom}, {"steps", steps}};
}

Derivation derivation_from_json(const Json& j) {
    Derivation d;
    d.axiom = j.at("axiom").get<std::string>();
    for (const auto& s : j.at("steps"))
        d.steps.push_back({s.at("rule").get<int>(), s.at("position").get<int>()});
    return d;
}

Json graph_to_json(const LabeledGraph& g) {
    Json vertices = Json::array();
    for (Vertex v = 0; v < g.vertex_count; ++v) {
        Json labels = Json::array();
        for (const auto& l : g.labels[v])
            labels.push_back(l);
        vertices.push_back(Json{{"id", v}, {"labels", labels}});
    }
    Json edges = Json::array();
    for (const auto& e : g.edges)
        edges.push_back(Json{{"src", e.src}, {"label", e.label}, {"dst", e.dst}});
    return Json{{"vertices", vertices}, {"edges", edges}};
}

Json valuation_to_json(const Valuation& v) {
    Json out = Json::object();
    for (const auto& [x, n] : v)
        out[x] = n;
    return out;
}

namespace {

const char* status_name(PrpResult::Status s) {
    switch (s) {
    case PrpResult::Status::Positive: return "POSITIVE";
    case PrpResult::Status::NegativeWithinBound: return "NEGATIVE-up-to-bound";
    case PrpResult::Status::Truncated: return "TRUNCATED";
    }
    return "?";
}

Json bounds_to_json(const PrpBounds& b) {
    return Json{{"max_steps", b.max_steps},
                {"max_vertices", b.max_vertices},
                {"max_states", b.max_states}};
}

} // namespace

Json prp_result_to_json(const PrpResult& r, const PrpBounds& bounds, const TypeTable& table) {
    Json out;
    out["status"] = status_name(r.status);
    out["bounds"] = bounds_to_json(bounds);
    if (r.witness) {
        const PrpWitness& w = *r.witness;
        Json firing = Json::array();
        BehaviorNet beh = build_behavior(w.system, table);
        for (size_t i = 0; i < w.firing.size(); ++i) {
            const auto& bt = beh.transitions[w.firing[i]];
            Json step;
            if (bt.origin == BehaviorTransition::Origin::Internal) {
                step["kind"] = "internal";
                step["vertex"] = bt.v1;
                step["transition"] =
                    table.types[beh.type_of_vertex[bt.v1]].net.transitions[bt.local_t1];
            } else {
                step["kind"] = "rendezvous";
                step["src"] = bt.origin_edge.src;
                step["dst"] = bt.origin_edge.dst;
                step["label"] = bt.origin_edge.label;
            }
            firing.push_back(step);
        }
        out["witness"] = Json{{"derivation", derivation_to_json(w.derivation)},
                              {"term", print_term(w.term)},
                              {"system", graph_to_json(w.system.graph)},
                              {"system_dot", graph_to_dot(w.system.graph, "witness")},
                              {"firing", firing},
                              {"valuation", valuation_to_json(w.valuation)}};
    } else {
        out["witness"] = nullptr;
    }
    out["stats"] =
        Json{{"systems_checked", r.systems_checked}, {"states_explored", r.states_explored}};
    if (!r.truncation_reason.empty())
        out["truncation_reason"] = r.truncation_reason;
    return out;
}

std::string prp_result_to_text(const PrpResult& r, const PrpBounds& bounds) {
    std::ostringstream os;
    os << "status: " << status_name(r.status) << "\n";
    os << "bounds: max_steps=" << bounds.max_steps << " max_vertices=" << bounds.max_vertices
       << " max_states=" << bounds.max_states << "\n";
    os << "stats: systems_checked=" << r.systems_checked
       << " states_explored=" << r.states_explored << "\n";
    if (r.witness) {
        const PrpWitness& w = *r.witness;
        os << "witness term: " << print_term(w.term) << "\n";
        os << "witness system: " << w.system.graph.vertex_count << " vertices, "
           << w.system.graph.edges.size() << " edges\n";
        os << "witness firing (" << w.firing_names.size() << " steps):";
        for (const auto& n : w.firing_names)
            os << " " << n;
        os << "\nwitness valuation:";
        for (const auto& [x, n] : w.valuation)
            os << " " << x << "=" << n;
        os << "\n";
    }
    if (!r.truncation_reason.empty())
        os << "truncated: " << r.truncation_reason << "\n";
    return os.str();
}

Json equiv_report_to_json(const EquivSuiteReport& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks)
        checks.push_back(Json{{"name", c.name},
                              {"passed", c.passed},
                              {"truncated", c.truncated},
                              {"detail", c.detail}});
    return Json{{"all_passed", r.all_passed()}, {"checks", checks}};
}

std::string equiv_report_to_text(const EquivSuiteReport& r) {
    std::ostringstream os;
    for (const auto& c : r.checks) {
        os << (c.passed ? "PASS" : "FAIL") << (c.truncated ? " (truncated)" : "") << "  "
           << c.name;
        if (!c.detail.empty())
            os << ": " << c.detail;
        os << "\n";
    }
    return os.str();
}

ValidationReport replay_verdict(const SpecFile& spec, const Json& verdict) {
    ValidationReport rep;
    if (verdict.at("status").get<std::string>() != "POSITIVE") {
        rep.add("only POSITIVE verdicts carry a replayable witness");
        return rep;
    }
    const Json& w = verdict.at("witness");
    Derivation d = derivation_from_json(w.at("derivation"));

    const GrammarDecl* gd = nullptr;
    for (const auto& g : spec.grammars)
        for (const auto& a : g.grammar.axioms)
            if (a == d.axiom)
                gd = &g;
    if (!gd) {
        rep.add("no grammar in the spec has axiom '" + d.axiom + "'");
        return rep;
    }

    TypeTable table = spec.type_table();
    TermPtr term;
    try {
        term = replay_derivation(gd->grammar, d);
    } catch (const std::exception& e) {
        rep.add(std::string("derivation replay failed: ") + e.what());
        return rep;
    }
    if (!is_ground(term)) {
        rep.add("derivation is not complete");
        return rep;
    }
    if (w.contains("term") && print_term(term) != w.at("term").get<std::string>())
        rep.add("replayed term differs from the recorded term");

    LabeledGraph graph = eval_term(term, gd->grammar.algebra, table.alphabet);
    System sys;
    try {
        sys = System::from_graph(graph, table);
    } catch (const std::exception& e) {
        rep.add(e.what());
        return rep;
    }
    BehaviorNet beh = build_behavior(sys, table);

    // Map the recorded firing steps back to behavior transitions.
    State state = beh.initial;
    int idx = 0;
    for (const auto& step : w.at("firing")) {
        int found = -1;
        for (size_t t = 0; t < beh.transitions.size(); ++t) {
            const auto& bt = beh.transitions[t];
            if (step.at("kind") == "internal") {
                if (bt.origin != BehaviorTransition::Origin::Internal)
                    continue;
                if (bt.v1 != step.at("vertex").get<int>())
                    continue;
                const auto& name =
                    table.types[beh.type_of_vertex[bt.v1]].net.transitions[bt.local_t1];
                if (name != step.at("transition").get<std::string>())
                    continue;
            } else {
                if (bt.origin != BehaviorTransition::Origin::Rendezvous)
                    continue;
                if (bt.origin_edge.src != step.at("src").get<int>() ||
                    bt.origin_edge.dst != step.at("dst").get<int>() ||
                    bt.origin_edge.label != step.at("label").get<std::string>())
                    continue;
            }
            found = (int)t;
            break;
        }
        if (found < 0) {
            rep.add("firing step " + std::to_string(idx) + " matches no behavior transition");
            return rep;
        }
        if (!beh.enabled_in(state, beh.transitions[found])) {
            rep.add("firing step " + std::to_string(idx) + " is not enabled");
            return rep;
        }
        state = beh.fire_in(state, beh.transitions[found]);
        idx++;
    }

    // Valuation and formula check.
    const Json& val = w.at("valuation");
    std::vector<std::string> var_order;
    for (auto it = val.begin(); it != val.end(); ++it)
        var_order.push_back(it.key());
    std::sort(var_order.begin(), var_order.end());

    // The verdict does not name the labeling/formula; recheck against every
    // analysis whose grammar matches.
    bool checked = false;
    for (const auto& a : spec.analyses) {
        if (!a.grammar.empty() && spec.find_grammar(a.grammar) != gd)
            continue;
        const LabelingDecl* ld = a.labeling.empty() ? nullptr : spec.find_labeling(a.labeling);
        const FormulaDecl* fd = a.formula.empty() ? nullptr : spec.find_formula(a.formula);
        if (!ld || !fd)
            continue;
        auto vo = variable_order(ld->map, fd->formula);
        auto lifted = lift_labeling(beh, table, ld->map, vo);
        Valuation got = valuation_of(beh, lifted, vo, state);
        for (const auto& [x, n] : got) {
            if (!val.contains(x) || val.at(x).get<uint64_t>() != n) {
                rep.add("recorded valuation disagrees with the replayed marking on '" + x + "'");
                return rep;
            }
        }
        if (!eval_formula(fd->formula, got)) {
            rep.add("replayed marking does not satisfy formula '" + a.formula + "'");
            return rep;
        }
        checked = true;
        break;
    }
    if (!checked)
        rep.add("no analysis in the spec matches the witness grammar; formula not rechecked");
    return rep;
}

ResolvedAnalysis resolve_analysis(const SpecFile& spec, const std::string& analysis_name,
                                  const std::string& grammar_name) {
    ResolvedAnalysis out;
    const AnalysisDecl* a = nullptr;
    if (!analysis_name.empty()) {
        a = spec.find_analysis(analysis_name);
        if (!a)
            throw std::runtime_error("no analysis named '" + analysis_name + "'");
    } else if (spec.analyses.size() == 1) {
        a = &spec.analyses[0];
    } else if (spec.analyses.size() > 1) {
        throw std::runtime_error("several analyses declared; pick one with --analysis");
    }

    std::string gname = grammar_name;
    if (gname.empty() && a)
        gname = a->grammar;
    if (gname.empty() && spec.grammars.size() == 1)
        gname = spec.grammars[0].name;
    if (!gname.empty()) {
        out.grammar = spec.find_grammar(gname);
        if (!out.grammar)
            throw std::runtime_error("no grammar named '" + gname + "'");
    }

    if (a) {
        out.bounds = a->bounds;
        if (!a->labeling.empty()) {
            const LabelingDecl* l = spec.find_labeling(a->labeling);
            if (!l)
                throw std::runtime_error("no labeling named '" + a->labeling + "'");
            out.labeling = l->map;
        }
        if (!a->formula.empty()) {
            const FormulaDecl* f = spec.find_formula(a->formula);
            if (!f)
                throw std::runtime_error("no formula named '" + a->formula + "'");
            out.formula = f->formula;
        }
    }
    if (!out.formula && spec.formulas.size() == 1)
        out.formula = spec.formulas[0].formula;
    if (out.labeling.empty() && spec.labelings.size() == 1)
        out.labeling = spec.labelings[0].map;
    return out;
}

TermPtr random_vr_term(std::mt19937_64& rng, const TypeTable& table,
                       const RandomTermOptions& opts) {
    std::vector<std::string> ports;
    for (const auto& [p, t] : table.alphabet.port_type)
        ports.push_back(p);
    if (ports.empty())
        throw std::runtime_error("random term generation needs at least one port");

    auto pick = [&](size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(rng); };
    auto chance = [&](double p) {
        return std::uniform_real_distribution<double>(0, 1)(rng) < p;
    };

    std::function<TermPtr(int, int)> gen = [&](int budget, int depth) -> TermPtr {
        if (budget <= 1 || depth >= opts.max_depth)
            return mk_vertex(ports[pick(ports.size())]);
        if (chance(0.5)) { // union splits the vertex budget
            int left = 1 + (int)pick((size_t)budget - 1);
            return mk_union(gen(left, depth + 1), gen(budget - left, depth + 1));
        }
        TermPtr child = gen(budget, depth + 1);
        PortSet sort = infer_sort(child, table.alphabet);

        if (chance(opts.add_edge_weight) && sort.size() >= 2) {
            std::vector<std::string> sv(sort.begin(), sort.end());
            size_t i = pick(sv.size());
            size_t j = pick(sv.size() - 1);
            if (j >= i)
                j++;
            const auto& p1 = sv[i];
            const auto& p2 = sv[j];
            const ProcessType& t1 = table.type(table.alphabet.port_type.at(p1));
            const ProcessType& t2 = table.type(table.alphabet.port_type.at(p2));
            std::vector<std::string> obs1(t1.observable.begin(), t1.observable.end());
            std::vector<std::string> obs2(t2.observable.begin(), t2.observable.end());
            if (!obs1.empty() && !obs2.empty()) {
                EdgeLabel l = make_pair_label(obs1[pick(obs1.size())], obs2[pick(obs2.size())]);
                return mk_add_edge(l, p1, p2, child);
            }
        }
        if (chance(opts.relab_weight) && !sort.empty()) {
            std::vector<std::pair<std::string, std::string>> map;
            for (const auto& p : sort) {
                if (chance(0.25))
                    continue; // erase this port
                const std::string& type = table.alphabet.port_type.at(p);
                std::vector<std::string> same;
                for (const auto& [q, t] : table.alphabet.port_type)
                    if (t == type)
                        same.push_back(q);
                map.push_back({p, same[pick(same.size())]});
            }
            return mk_relab(std::move(map), child);
        }
        return child;
    };

    int budget = 1 + (int)pick((size_t)opts.max_vertices);
    TermPtr t = gen(budget, 0);
    if (chance(0.25))
        t = mk_relab({}, t); // sometimes close the sort entirely
    return t;
}

} // namespace vrhr
