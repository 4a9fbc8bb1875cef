#pragma once

#include <random>
#include <string>

#include "json.hpp"

#include "vrhr/equivalence.hpp"
#include "vrhr/specfile.hpp"

namespace vrhr {

using Json = nlohmann::ordered_json;

Json derivation_to_json(const Derivation& d);
Derivation derivation_from_json(const Json& j);

Json graph_to_json(const LabeledGraph& g);
Json valuation_to_json(const Valuation& v);

struct VerdictStats {
    size_t systems_checked = 0;
    size_t states_explored = 0;
};

/// The machine-readable verdict object emitted by `prp` and consumed by
/// `replay`: {status, bounds, witness, stats}.
Json prp_result_to_json(const PrpResult& r, const PrpBounds& bounds, const TypeTable& table);

std::string prp_result_to_text(const PrpResult& r, const PrpBounds& bounds);

Json equiv_report_to_json(const EquivSuiteReport& r);
std::string equiv_report_to_text(const EquivSuiteReport& r);

/// Re-derives, re-evaluates, re-fires and re-checks a positive verdict
/// against its spec. Empty report means the witness replays end to end.
ValidationReport replay_verdict(const SpecFile& spec, const Json& verdict);

/// Resolves the analysis configuration: the named one, the sole one, or
/// defaults; explicit bound overrides win.
struct ResolvedAnalysis {
    const GrammarDecl* grammar = nullptr;
    PlaceLabeling labeling;
    FormulaPtr formula;
    PrpBounds bounds;
};

ResolvedAnalysis resolve_analysis(const SpecFile& spec, const std::string& analysis_name,
                                  const std::string& grammar_name = "");

struct RandomTermOptions {
    int max_vertices = 6;
    int max_depth = 7;
    double relab_weight = 0.3;
    double add_edge_weight = 0.35;
};

/// Pseudo-random ground VR term that passes strict validation: add_edge is
/// only emitted over ports present in the child's sort.
TermPtr random_vr_term(std::mt19937_64& rng, const TypeTable& table,
                       const RandomTermOptions& opts = {});

} // namespace vrhr
