// Command-line front end: spec checking, term evaluation, bounded language
// enumeration, the VR -> HR translation, parametric reachability and the
// routed-equivalence checks.

#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"

#include "vrhr/frontend.hpp"

using namespace vrhr;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitTruncated = 3;

struct GlobalOpts {
    int max_steps = -1;
    int max_vertices = -1;
    long long max_states = -1;
    bool json = false;
    bool deterministic = true;
    uint64_t seed = 1;
};

void apply_overrides(PrpBounds& bounds, const GlobalOpts& g) {
    if (g.max_steps >= 0)
        bounds.max_steps = g.max_steps;
    if (g.max_vertices >= 0)
        bounds.max_vertices = g.max_vertices;
    if (g.max_states >= 0)
        bounds.max_states = (size_t)g.max_states;
}

SpecFile load_spec(const std::string& path) {
    try {
        return parse_spec_file(path);
    } catch (const SpecError& e) {
        throw std::runtime_error(e.format(path));
    }
}

void write_out(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out)
        throw std::runtime_error("cannot write '" + out_path + "'");
    out << text;
}

Derivation load_derivation(const std::string& inline_json, const std::string& file) {
    std::string text = inline_json;
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in)
            throw std::runtime_error("cannot open '" + file + "'");
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    if (text.empty())
        throw std::runtime_error("a derivation is required (--derivation or --derivation-file)");
    return derivation_from_json(Json::parse(text));
}

TermPtr materialize_term(const SpecFile& spec, const std::string& term_text,
                         const std::string& grammar_name, const std::string& deriv_json,
                         const std::string& deriv_file, Algebra* algebra_out) {
    if (!term_text.empty()) {
        const GrammarDecl* g = grammar_name.empty() ? nullptr : spec.find_grammar(grammar_name);
        Algebra alg = g ? g->grammar.algebra
                        : (spec.grammars.empty() ? Algebra::VR : spec.grammars[0].grammar.algebra);
        if (algebra_out)
            *algebra_out = alg;
        return parse_term_text(term_text, spec, alg);
    }
    Derivation d = load_derivation(deriv_json, deriv_file);
    const GrammarDecl* g = nullptr;
    if (!grammar_name.empty())
        g = spec.find_grammar(grammar_name);
    else
        for (const auto& cand : spec.grammars)
            for (const auto& a : cand.grammar.axioms)
                if (a == d.axiom)
                    g = &cand;
    if (!g)
        throw std::runtime_error("no grammar matches the derivation");
    if (algebra_out)
        *algebra_out = g->grammar.algebra;
    return replay_derivation(g->grammar, d);
}

int run_check(const std::string& path, const GlobalOpts& g) {
    SpecFile spec = load_spec(path);
    ValidationReport rep = validate_spec(spec);
    if (g.json) {
        Json items = Json::array();
        for (const auto& v : rep.items)
            items.push_back(v.message);
        std::cout << Json{{"ok", rep.ok()}, {"diagnostics", items}}.dump(2) << "\n";
    } else if (rep.ok()) {
        std::cout << "ok: " << spec.processes.size() << " process types, "
                  << spec.grammars.size() << " grammars, " << spec.formulas.size()
                  << " formulas\n";
    } else {
        std::cerr << rep.to_string();
    }
    return rep.ok() ? kExitPass : kExitUsage;
}

int run_prp(const std::string& path, const std::string& analysis, const GlobalOpts& g) {
    SpecFile spec = load_spec(path);
    ValidationReport rep = validate_spec(spec);
    if (!rep.ok())
        throw std::runtime_error("spec is invalid:\n" + rep.to_string());
    ResolvedAnalysis ra = resolve_analysis(spec, analysis);
    if (!ra.grammar)
        throw std::runtime_error("no grammar to analyze");
    if (!ra.formula)
        throw std::runtime_error("no formula to check");
    apply_overrides(ra.bounds, g);
    TypeTable table = spec.type_table();
    PrpResult r = solve_prp(ra.grammar->grammar, table, ra.labeling, ra.formula, ra.bounds);
    if (g.json)
        std::cout << prp_result_to_json(r, ra.bounds, table).dump(2) << "\n";
    else
        std::cout << prp_result_to_text(r, ra.bounds);
    switch (r.status) {
    case PrpResult::Status::Positive: return kExitPass;
    case PrpResult::Status::NegativeWithinBound: return kExitFail;
    case PrpResult::Status::Truncated: return kExitTruncated;
    }
    return kExitUsage;
}

int run_translate(const std::string& path, const std::string& out, const GlobalOpts&) {
    SpecFile spec = load_spec(path);
    SpecFile hr = translate_spec(spec);
    write_out(out, print_spec(hr));
    return kExitPass;
}

int run_enumerate(const std::string& path, const std::string& analysis,
                  const std::string& grammar, long long max_graphs, const GlobalOpts& g) {
    SpecFile spec = load_spec(path);
    ResolvedAnalysis ra = resolve_analysis(spec, analysis, grammar);
    if (!ra.grammar)
        throw std::runtime_error("no grammar to enumerate");
    apply_overrides(ra.bounds, g);
    EnumBounds eb;
    eb.max_steps = ra.bounds.max_steps;
    eb.max_vertices = ra.bounds.max_vertices;
    if (max_graphs >= 0)
        eb.max_graphs = (size_t)max_graphs;
    TypeTable table = spec.type_table();

    Json items = Json::array();
    EnumOutcome outcome = enumerate_language(
        ra.grammar->grammar, table.alphabet, eb, [&](EnumItem&& item) {
            if (g.json) {
                items.push_back(Json{{"derivation", derivation_to_json(item.derivation)},
                                     {"term", print_term(item.term)},
                                     {"vertices", item.graph.vertex_count},
                                     {"edges", item.graph.edges.size()}});
            } else {
                std::cout << item.graph.vertex_count << " vertices, "
                          << item.graph.edges.size() << " edges: " << print_term(item.term)
                          << "\n";
            }
            return true;
        });
    if (g.json) {
        std::cout << Json{{"items", items},
                          {"exhausted", outcome.exhausted},
                          {"truncation_reason", outcome.truncation_reason}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << (outcome.exhausted ? "exhausted" : "truncated: " + outcome.truncation_reason)
                  << " (" << outcome.graphs_yielded << " graphs)\n";
    }
    return outcome.exhausted ? kExitPass : kExitTruncated;
}

int run_eval(const std::string& path, const std::string& term_text, const std::string& grammar,
             const std::string& deriv, const std::string& deriv_file, const std::string& out,
             const GlobalOpts& g) {
    SpecFile spec = load_spec(path);
    Algebra alg = Algebra::VR;
    TermPtr term = materialize_term(spec, term_text, grammar, deriv, deriv_file, &alg);
    if (!is_ground(term))
        throw std::runtime_error("the derivation is not complete");
    TypeTable table = spec.type_table();
    LabeledGraph graph = eval_term(term, alg, table.alphabet);
    if (g.json)
        write_out(out, graph_to_json(graph).dump(2) + "\n");
    else
        write_out(out, graph_to_dot(graph, "value"));
    return kExitPass;
}

int run_dot(const std::string& path, const std::string& process, const std::string& term_text,
            const std::string& grammar, const std::string& deriv, const std::string& deriv_file,
            bool behavior, const std::string& out, const GlobalOpts&) {
    SpecFile spec = load_spec(path);
    TypeTable table = spec.type_table();
    if (!process.empty()) {
        const ProcessType& p = table.type(process);
        write_out(out, petri_to_dot(p.net, p.name, p.observable));
        return kExitPass;
    }
    Algebra alg = Algebra::VR;
    TermPtr term = materialize_term(spec, term_text, grammar, deriv, deriv_file, &alg);
    LabeledGraph graph = eval_term(term, alg, table.alphabet);
    if (behavior) {
        System sys = System::from_graph(graph, table);
        BehaviorNet beh = build_behavior(sys, table);
        write_out(out, behavior_to_dot(beh, table, "behavior"));
    } else {
        write_out(out, graph_to_dot(graph, "value"));
    }
    return kExitPass;
}

int run_replay(const std::string& path, const std::string& verdict_file, const GlobalOpts& g) {
    SpecFile spec = load_spec(path);
    std::ifstream in(verdict_file);
    if (!in)
        throw std::runtime_error("cannot open '" + verdict_file + "'");
    Json verdict = Json::parse(in);
    ValidationReport rep = replay_verdict(spec, verdict);
    if (g.json) {
        Json items = Json::array();
        for (const auto& v : rep.items)
            items.push_back(v.message);
        std::cout << Json{{"verified", rep.ok()}, {"diagnostics", items}}.dump(2) << "\n";
    } else {
        std::cout << (rep.ok() ? "witness verified\n" : rep.to_string());
    }
    return rep.ok() ? kExitPass : kExitFail;
}

int run_equiv(const std::string& path, const std::string& analysis, const std::string& grammar,
              int max_len, long long random_terms, const GlobalOpts& g) {
    SpecFile spec = load_spec(path);
    TypeTable table = spec.type_table();
    ValidationReport rep = validate_spec(spec);
    if (!rep.ok())
        throw std::runtime_error("spec is invalid:\n" + rep.to_string());

    bool all_passed = true;
    bool any_truncated = false;
    Json instances = Json::array();

    if (random_terms > 0) {
        std::mt19937_64 rng(g.seed);
        long long failures = 0;
        for (long long i = 0; i < random_terms; ++i) {
            TermPtr theta = random_vr_term(rng, table);
            ValidationReport r = check_expansion_correspondence(theta, table);
            if (!r.ok()) {
                failures++;
                all_passed = false;
                if (g.json)
                    instances.push_back(
                        Json{{"term", print_term(theta)}, {"error", r.to_string()}});
                else
                    std::cout << "FAIL " << print_term(theta) << "\n" << r.to_string();
            }
        }
        if (g.json)
            std::cout << Json{{"random_terms", random_terms},
                              {"failures", failures},
                              {"instances", instances}}
                             .dump(2)
                      << "\n";
        else
            std::cout << (random_terms - failures) << "/" << random_terms
                      << " random terms passed the expansion correspondence\n";
        return all_passed ? kExitPass : kExitFail;
    }

    ResolvedAnalysis ra = resolve_analysis(spec, analysis, grammar);
    if (!ra.grammar)
        throw std::runtime_error("no grammar to check");
    apply_overrides(ra.bounds, g);
    EnumBounds eb;
    eb.max_steps = ra.bounds.max_steps;
    eb.max_vertices = ra.bounds.max_vertices;
    EquivSuiteOptions opts;
    opts.max_states = ra.bounds.max_states;
    opts.max_trace_len = max_len;

    EnumOutcome outcome = enumerate_language(
        ra.grammar->grammar, table.alphabet, eb, [&](EnumItem&& item) {
            EquivContext ctx = make_equiv_context(item.term, table, ra.labeling, ra.formula);
            EquivSuiteReport r = run_equivalence_suite(ctx, opts);
            all_passed = all_passed && r.all_passed();
            any_truncated = any_truncated || r.any_truncated();
            if (g.json) {
                instances.push_back(
                    Json{{"term", print_term(item.term)}, {"report", equiv_report_to_json(r)}});
            } else {
                std::cout << "instance " << print_term(item.term) << "\n"
                          << equiv_report_to_text(r);
            }
            return true;
        });
    any_truncated = any_truncated || !outcome.exhausted;
    if (g.json)
        std::cout << Json{{"instances", instances},
                          {"all_passed", all_passed},
                          {"truncated", any_truncated}}
                         .dump(2)
                  << "\n";
    if (!all_passed)
        return kExitFail;
    return any_truncated ? kExitTruncated : kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification toolkit for grammar-specified process networks"};
    app.require_subcommand(1);
    app.footer("exit codes: 0 positive/pass, 1 negative-up-to-bound/fail, "
               "2 usage or parse error, 3 truncated");

    GlobalOpts g;
    app.add_option("--max-steps", g.max_steps, "derivation step bound override");
    app.add_option("--max-vertices", g.max_vertices, "graph size bound override");
    app.add_option("--max-states", g.max_states, "state exploration bound override");
    app.add_flag("--json", g.json, "machine-readable output");
    app.add_flag("--deterministic", g.deterministic,
                 "single-threaded reproducible mode (the default)");
    app.add_option("--seed", g.seed, "seed for the random-term property checks");

    std::string spec_path, analysis, grammar, term_text, deriv, deriv_file, out, process,
        verdict_file;
    long long max_graphs = -1, random_terms = 0;
    int max_len = 6;
    bool behavior = false;

    auto* check = app.add_subcommand("check", "parse and validate a spec file");
    check->add_option("spec", spec_path, "spec file")->required();

    auto* eval = app.add_subcommand("eval", "evaluate a term or derivation to a graph");
    eval->add_option("spec", spec_path)->required();
    eval->add_option("--term", term_text, "term in the surface syntax");
    eval->add_option("--grammar", grammar, "grammar for the derivation");
    eval->add_option("--derivation", deriv, "derivation steps as JSON");
    eval->add_option("--derivation-file", deriv_file, "file with derivation JSON");
    eval->add_option("-o,--output", out, "output path (default stdout)");

    auto* enumerate = app.add_subcommand("enumerate", "bounded language listing");
    enumerate->add_option("spec", spec_path)->required();
    enumerate->add_option("--analysis", analysis);
    enumerate->add_option("--grammar", grammar);
    enumerate->add_option("--max-graphs", max_graphs);

    auto* translate = app.add_subcommand("translate", "emit the routed HR spec");
    translate->add_option("spec", spec_path)->required();
    translate->add_option("-o,--output", out);

    auto* prp = app.add_subcommand("prp", "solve the parametric reachability instance");
    prp->add_option("spec", spec_path)->required();
    prp->add_option("--analysis", analysis);

    auto* equiv = app.add_subcommand("equiv", "routed-equivalence checks");
    equiv->add_option("spec", spec_path)->required();
    equiv->add_option("--analysis", analysis);
    equiv->add_option("--grammar", grammar);
    equiv->add_option("--max-len", max_len, "stutter-trace prefix length");
    equiv->add_option("--random", random_terms, "check N pseudo-random ground terms instead");

    auto* replay = app.add_subcommand("replay", "verify a positive verdict end to end");
    replay->add_option("spec", spec_path)->required();
    replay->add_option("--verdict", verdict_file, "verdict JSON from prp --json")->required();

    auto* dot = app.add_subcommand("dot", "emit DOT for nets, graphs and behaviors");
    dot->add_option("spec", spec_path)->required();
    dot->add_option("--process", process, "render this process type's net");
    dot->add_option("--term", term_text);
    dot->add_option("--grammar", grammar);
    dot->add_option("--derivation", deriv);
    dot->add_option("--derivation-file", deriv_file);
    dot->add_flag("--behavior", behavior, "render the system's behavior net");
    dot->add_option("-o,--output", out);

    for (auto* sub : app.get_subcommands({}))
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed())
            return run_check(spec_path, g);
        if (eval->parsed())
            return run_eval(spec_path, term_text, grammar, deriv, deriv_file, out, g);
        if (enumerate->parsed())
            return run_enumerate(spec_path, analysis, grammar, max_graphs, g);
        if (translate->parsed())
            return run_translate(spec_path, out, g);
        if (prp->parsed())
            return run_prp(spec_path, analysis, g);
        if (equiv->parsed())
            return run_equiv(spec_path, analysis, grammar, max_len, random_terms, g);
        if (replay->parsed())
            return run_replay(spec_path, verdict_file, g);
        if (dot->parsed())
            return run_dot(spec_path, process, term_text, grammar, deriv, deriv_file, behavior,
                           out, g);
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.format(spec_path) << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
