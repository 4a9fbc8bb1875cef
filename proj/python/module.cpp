// Python bindings over the spec-file front end: parse, check, evaluate,
// enumerate, translate, solve and replay, all exchanging plain dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "vrhr/frontend.hpp"

namespace py = pybind11;
using namespace vrhr;

namespace {

py::object to_py(const Json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

SpecFile parse_or_raise(const std::string& text) {
    try {
        return parse_spec(text);
    } catch (const SpecError& e) {
        throw std::runtime_error(e.format());
    }
}

py::object py_check(const std::string& text) {
    Json items = Json::array();
    bool ok = true;
    try {
        SpecFile spec = parse_or_raise(text);
        ValidationReport rep = validate_spec(spec);
        ok = rep.ok();
        for (const auto& v : rep.items)
            items.push_back(v.message);
    } catch (const std::exception& e) {
        ok = false;
        items.push_back(e.what());
    }
    return to_py(Json{{"ok", ok}, {"diagnostics", items}});
}

PrpBounds with_overrides(PrpBounds bounds, py::object max_steps, py::object max_vertices,
                         py::object max_states) {
    if (!max_steps.is_none())
        bounds.max_steps = max_steps.cast<int>();
    if (!max_vertices.is_none())
        bounds.max_vertices = max_vertices.cast<int>();
    if (!max_states.is_none())
        bounds.max_states = max_states.cast<size_t>();
    return bounds;
}

py::object py_prp(const std::string& text, const std::string& analysis, py::object max_steps,
                  py::object max_vertices, py::object max_states) {
    SpecFile spec = parse_or_raise(text);
    ResolvedAnalysis ra = resolve_analysis(spec, analysis);
    if (!ra.grammar)
        throw std::runtime_error("no grammar to analyze");
    if (!ra.formula)
        throw std::runtime_error("no formula to check");
    ra.bounds = with_overrides(ra.bounds, max_steps, max_vertices, max_states);
    TypeTable table = spec.type_table();
    PrpResult r = solve_prp(ra.grammar->grammar, table, ra.labeling, ra.formula, ra.bounds);
    return to_py(prp_result_to_json(r, ra.bounds, table));
}

std::string py_translate(const std::string& text) {
    SpecFile spec = parse_or_raise(text);
    return print_spec(translate_spec(spec));
}

py::object py_enumerate(const std::string& text, const std::string& analysis,
                        const std::string& grammar, py::object max_steps,
                        py::object max_vertices) {
    SpecFile spec = parse_or_raise(text);
    ResolvedAnalysis ra = resolve_analysis(spec, analysis, grammar);
    if (!ra.grammar)
        throw std::runtime_error("no grammar to enumerate");
    ra.bounds = with_overrides(ra.bounds, max_steps, max_vertices, py::none());
    EnumBounds eb;
    eb.max_steps = ra.bounds.max_steps;
    eb.max_vertices = ra.bounds.max_vertices;
    TypeTable table = spec.type_table();
    Json items = Json::array();
    EnumOutcome outcome =
        enumerate_language(ra.grammar->grammar, table.alphabet, eb, [&](EnumItem&& item) {
            items.push_back(Json{{"derivation", derivation_to_json(item.derivation)},
                                 {"term", print_term(item.term)},
                                 {"graph", graph_to_json(item.graph)}});
            return true;
        });
    return to_py(Json{{"items", items},
                      {"exhausted", outcome.exhausted},
                      {"truncation_reason", outcome.truncation_reason}});
}

py::object py_eval_term(const std::string& text, const std::string& term_text,
                        const std::string& algebra) {
    SpecFile spec = parse_or_raise(text);
    Algebra alg = algebra == "hr" ? Algebra::HR : Algebra::VR;
    TermPtr term = parse_term_text(term_text, spec, alg);
    LabeledGraph g = eval_term(term, alg, spec.type_table().alphabet);
    return to_py(graph_to_json(g));
}

std::string py_term_dot(const std::string& text, const std::string& term_text,
                        const std::string& algebra) {
    SpecFile spec = parse_or_raise(text);
    Algebra alg = algebra == "hr" ? Algebra::HR : Algebra::VR;
    TermPtr term = parse_term_text(term_text, spec, alg);
    return graph_to_dot(eval_term(term, alg, spec.type_table().alphabet), "value");
}

py::object py_equiv(const std::string& text, const std::string& analysis, py::object max_steps,
                    py::object max_vertices, int max_len) {
    SpecFile spec = parse_or_raise(text);
    ResolvedAnalysis ra = resolve_analysis(spec, analysis);
    if (!ra.grammar)
        throw std::runtime_error("no grammar to check");
    ra.bounds = with_overrides(ra.bounds, max_steps, max_vertices, py::none());
    TypeTable table = spec.type_table();
    EnumBounds eb;
    eb.max_steps = ra.bounds.max_steps;
    eb.max_vertices = ra.bounds.max_vertices;
    EquivSuiteOptions opts;
    opts.max_states = ra.bounds.max_states;
    opts.max_trace_len = max_len;
    Json instances = Json::array();
    bool all_passed = true;
    enumerate_language(ra.grammar->grammar, table.alphabet, eb, [&](EnumItem&& item) {
        EquivContext ctx = make_equiv_context(item.term, table, ra.labeling, ra.formula);
        EquivSuiteReport rep = run_equivalence_suite(ctx, opts);
        all_passed = all_passed && rep.all_passed();
        instances.push_back(
            Json{{"term", print_term(item.term)}, {"report", equiv_report_to_json(rep)}});
        return true;
    });
    return to_py(Json{{"all_passed", all_passed}, {"instances", instances}});
}

py::object py_equiv_random(const std::string& text, int count, uint64_t seed) {
    SpecFile spec = parse_or_raise(text);
    TypeTable table = spec.type_table();
    std::mt19937_64 rng(seed);
    Json failures = Json::array();
    for (int i = 0; i < count; ++i) {
        TermPtr theta = random_vr_term(rng, table);
        ValidationReport rep = check_expansion_correspondence(theta, table);
        if (!rep.ok())
            failures.push_back(Json{{"term", print_term(theta)}, {"error", rep.to_string()}});
    }
    return to_py(Json{{"checked", count},
                      {"failures", failures},
                      {"all_passed", failures.empty()}});
}

py::object py_replay(const std::string& text, const std::string& verdict_json) {
    SpecFile spec = parse_or_raise(text);
    ValidationReport rep = replay_verdict(spec, Json::parse(verdict_json));
    Json items = Json::array();
    for (const auto& v : rep.items)
        items.push_back(v.message);
    return to_py(Json{{"verified", rep.ok()}, {"diagnostics", items}});
}

} // namespace

PYBIND11_MODULE(_vrhr, m) {
    m.doc() = "verification toolkit for grammar-specified process networks";

    m.def("check", &py_check, py::arg("spec"),
          "Parse and validate a spec; returns {ok, diagnostics}.");
    m.def("prp", &py_prp, py::arg("spec"), py::arg("analysis") = "",
          py::arg("max_steps") = py::none(), py::arg("max_vertices") = py::none(),
          py::arg("max_states") = py::none(),
          "Solve the parametric reachability instance; returns the verdict dict.");
    m.def("translate", &py_translate, py::arg("spec"),
          "Emit the routed HR spec for a VR spec.");
    m.def("enumerate_systems", &py_enumerate, py::arg("spec"), py::arg("analysis") = "",
          py::arg("grammar") = "", py::arg("max_steps") = py::none(),
          py::arg("max_vertices") = py::none(),
          "Bounded listing of the grammar's language.");
    m.def("eval_term", &py_eval_term, py::arg("spec"), py::arg("term"),
          py::arg("algebra") = "vr", "Evaluate a term to a graph dict.");
    m.def("term_dot", &py_term_dot, py::arg("spec"), py::arg("term"), py::arg("algebra") = "vr",
          "Evaluate a term and render DOT.");
    m.def("equiv", &py_equiv, py::arg("spec"), py::arg("analysis") = "",
          py::arg("max_steps") = py::none(), py::arg("max_vertices") = py::none(),
          py::arg("max_len") = 6, "Routed-equivalence suite over the enumerated language.");
    m.def("equiv_random", &py_equiv_random, py::arg("spec"), py::arg("count") = 50,
          py::arg("seed") = 1, "Expansion correspondence on pseudo-random ground terms.");
    m.def("replay", &py_replay, py::arg("spec"), py::arg("verdict_json"),
          "Re-derive, re-fire and re-check a positive verdict.");
}
