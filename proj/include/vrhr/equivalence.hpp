#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vrhr/explore.hpp"
#include "vrhr/translate.hpp"

namespace vrhr {

/// Valuation sequence along a firing sequence, one entry per marking
/// (the initial marking's valuation included).
using AtomTrace = std::vector<Valuation>;

/// Collapses maximal runs of equal consecutive valuations.
AtomTrace stutter_collapse(const AtomTrace& t);

/// Everything needed to relate markings of a system's behavior with markings
/// of its routed translation's behavior.
struct EquivContext {
    TypeTable base;
    ExpandedAlphabet expanded;
    TermPtr theta;

    System sys;    // S = eval_vr(theta)
    System sys_e;  // S' = eval_hr(expand_term(theta))
    BehaviorNet beh, beh_e;

    std::vector<std::string> var_order;
    std::vector<int> lifted, lifted_e;

    // Vertex correspondence: S vertex -> surviving S' vertex and back.
    std::vector<Vertex> leaf_of;     // S vertex -> S' vertex
    std::vector<Vertex> orig_of;     // S' vertex -> S vertex or -1

    // Routed structure of S'.
    std::vector<int> router_t;                       // S' vertex -> index into obs_names, -1 for leaves
    std::vector<std::string> obs_names;              // observable transitions, fixed order
    std::vector<int> router_parent;                  // router -> parent router or -1
    std::vector<std::map<int, Vertex>> leaf_router;  // leaf -> (obs index -> its router)
    std::vector<std::vector<std::pair<Vertex, int>>> eps_preds; // vertex -> (pred, obs index)

    // Local place indices.
    std::vector<int> idle_idx, active_idx, wait_idx, reply_idx; // per S' vertex (routers)
    std::vector<std::map<int, int>> pend_idx;                   // per S' leaf: obs index -> place
    // Per S vertex and local place: observable transitions leaving/entering it.
    std::vector<std::map<int, std::vector<int>>> post_obs, pre_obs; // place -> obs indices

    bool is_eps_transition(int behavior_transition) const;
};

/// Builds the context, checking that exp(S') matches S (process types
/// compared modulo the half renaming, ports ignored: the routed side keeps
/// its ports on routers, which the expansion removes).
EquivContext make_equiv_context(const TermPtr& theta, const TypeTable& base,
                                const PlaceLabeling& labeling, const FormulaPtr& formula = {});

/// Lemma-style graph correspondence for one term; empty report means
/// exp(eval_hr(expand_term(theta))) matches eval_vr(theta), the epsilon
/// subgraph is a valid paired forest, and the edge trichotomy holds.
ValidationReport check_expansion_correspondence(const TermPtr& theta, const TypeTable& base);

/// A router is non-idle iff exactly one of its epsilon predecessors waits on
/// its transition.
ValidationReport check_routing_invariant(const EquivContext& ctx, const State& m_e);

/// Nonnegative cost of a routed marking; strictly decreases on every
/// epsilon-labeled firing.
uint64_t fuel(const EquivContext& ctx, const State& m_e);

struct RelatedResult {
    bool related = false;
    bool canonical = false;
    std::vector<int> condition; // per S vertex: 1, 2, 3, or 0 when none holds
};

RelatedResult markings_related(const EquivContext& ctx, const State& m, const State& m_e);

struct EquivCheck {
    std::string name;
    bool passed = true;
    bool truncated = false;
    std::string detail;
};

struct EquivSuiteOptions {
    size_t max_states = 1000000;
    int max_trace_len = 6;
    size_t max_trace_pairs = 4000000; // (state, trace) pairs per side
    size_t related_sample = 64;       // S-markings sampled for the invariance check
};

struct EquivSuiteReport {
    std::vector<EquivCheck> checks;
    bool all_passed() const;
    bool any_truncated() const;
};

/// Valuation-set equality, bounded stutter-trace equivalence, the routing
/// invariant over every reachable routed marking, strict fuel decrease over
/// every epsilon firing, and epsilon-invariance of the marking relation.
EquivSuiteReport run_equivalence_suite(const EquivContext& ctx, const EquivSuiteOptions& opts);

/// Valuation-set equality alone (also usable with a deliberately wrong
/// labeling as a negative control).
EquivCheck check_valuation_set_equality(const EquivContext& ctx, size_t max_states,
                                        const std::vector<int>* lifted_e_override = nullptr);

EquivCheck check_bounded_stutter_traces(const EquivContext& ctx, int max_len, size_t max_states,
                                        size_t max_pairs,
                                        const std::vector<int>* lifted_e_override = nullptr);

} // namespace vrhr
