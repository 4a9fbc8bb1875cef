#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vrhr/term.hpp"

namespace vrhr {

struct Rule {
    std::string lhs;
    TermPtr rhs;
};

struct Grammar {
    Algebra algebra = Algebra::VR;
    std::vector<std::string> nonterminals;
    std::vector<Rule> rules;
    std::vector<std::string> axioms;

    ValidationReport validate(const VertexLabelAlphabet& alphabet) const;
};

struct DerivationStep {
    int rule;     // index into Grammar::rules
    int position; // preorder index of the replaced nonterminal occurrence
};

struct Derivation {
    std::string axiom;
    std::vector<DerivationStep> steps;
};

/// Replaces the nonterminal occurrence at the given preorder position with
/// the rule's right-hand side. Throws on out-of-range positions or when the
/// occurrence does not match the rule's left-hand side.
TermPtr apply_step(const TermPtr& t, const Rule& rule, int position);

TermPtr replay_derivation(const Grammar& g, const Derivation& d);

struct EnumBounds {
    int max_steps = 8;
    int max_vertices = 8;
    size_t max_graphs = SIZE_MAX;
    size_t max_terms = 1u << 20; // sentential terms examined
};

struct EnumItem {
    Derivation derivation;
    TermPtr term;
    LabeledGraph graph;
};

struct EnumOutcome {
    bool exhausted = true;
    std::string truncation_reason;
    size_t ground_terms = 0;
    size_t graphs_yielded = 0;
};

/// Breadth-first enumeration of complete derivations, deduplicating
/// structurally identical sentential terms and isomorphic result graphs.
/// Deterministic order: axiom order, then BFS level, then rule order at the
/// leftmost nonterminal occurrence. The visitor returns false to stop early
/// (the outcome is then marked truncated).
EnumOutcome enumerate_language(const Grammar& g, const VertexLabelAlphabet& alphabet,
                               const EnumBounds& bounds,
                               const std::function<bool(EnumItem&&)>& yield);

std::vector<EnumItem> enumerate_all(const Grammar& g, const VertexLabelAlphabet& alphabet,
                                    const EnumBounds& bounds, EnumOutcome* outcome = nullptr);

} // namespace vrhr
