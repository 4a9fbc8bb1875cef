#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vrhr/explore.hpp"
#include "vrhr/formula.hpp"
#include "vrhr/grammar.hpp"
#include "vrhr/system.hpp"

namespace vrhr {

/// Parse error with position information.
struct SpecError {
    int line = 0;
    int col = 0;
    std::string message;

    std::string format(const std::string& filename = "") const;
};

struct GrammarDecl {
    std::string name;
    Grammar grammar;
};

struct LabelingDecl {
    std::string name;
    PlaceLabeling map;
};

struct FormulaDecl {
    std::string name;
    FormulaPtr formula;
};

struct AnalysisDecl {
    std::string name;
    std::string grammar, labeling, formula;
    PrpBounds bounds;
    bool has_max_steps = false, has_max_vertices = false, has_max_states = false;
};

/// One self-contained specification: process types, ports, grammars,
/// labelings, formulas and named analysis configurations.
struct SpecFile {
    std::vector<ProcessType> processes;
    std::vector<std::pair<std::string, std::string>> ports; // (port, type), declaration order
    std::vector<GrammarDecl> grammars;
    std::vector<LabelingDecl> labelings;
    std::vector<FormulaDecl> formulas;
    std::vector<AnalysisDecl> analyses;

    TypeTable type_table() const;
    const GrammarDecl* find_grammar(const std::string& name) const;
    const LabelingDecl* find_labeling(const std::string& name) const;
    const FormulaDecl* find_formula(const std::string& name) const;
    const AnalysisDecl* find_analysis(const std::string& name) const;
};

using ImportLoader = std::function<std::optional<std::string>(const std::string& path)>;

/// Throws SpecError on syntax errors (including quantifiers in formulas).
SpecFile parse_spec(const std::string& text, const ImportLoader& loader = {});

SpecFile parse_spec_file(const std::string& path);

/// Cross-reference and semantic validation of a parsed spec.
ValidationReport validate_spec(const SpecFile& spec);

/// Prints in the surface syntax; parse(print(spec)) is structurally equal.
std::string print_spec(const SpecFile& spec);

/// Parses a term in the surface syntax against a spec's declared names.
TermPtr parse_term_text(const std::string& text, const SpecFile& spec, Algebra algebra);

/// Builds the routed HR spec: generated process types and ports, translated
/// grammars, lifted labelings, copied formulas, analyses with a vertex bound
/// widened for the router overhead.
SpecFile translate_spec(const SpecFile& spec);

} // namespace vrhr
