#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "vrhr/formula.hpp"
#include "vrhr/grammar.hpp"
#include "vrhr/system.hpp"

namespace vrhr {

struct StateHash {
    size_t operator()(const State& s) const {
        size_t h = 1469598103934665603ull;
        for (uint8_t b : s) {
            h ^= b;
            h *= 1099511628211ull;
        }
        return h;
    }
};

struct ExploreResult {
    bool exhaustive = true;
    std::vector<State> states;
    std::unordered_map<State, int, StateHash> index;
    // Per state: (predecessor state id, fired behavior transition); -1 for the root.
    std::vector<std::pair<int, int>> pred;

    std::vector<int> path_to(int state_id) const; // transition ids from the initial state
};

/// Breadth-first reachability over the compact vertex -> place encoding.
ExploreResult explore(const BehaviorNet& b, size_t max_states);

/// Counting vector over var_order for a state under a lifted labeling.
std::vector<uint64_t> state_counts(const BehaviorNet& b, const std::vector<int>& lifted,
                                   size_t var_count, const State& s);

Valuation valuation_of(const BehaviorNet& b, const std::vector<int>& lifted,
                       const std::vector<std::string>& var_order, const State& s);

struct ReachVerdict {
    enum class Status { Sat, UnsatWithinBound, Truncated };
    Status status;
    std::vector<int> witness;    // behavior transition ids, shortest
    State final_state;
    Valuation valuation;
    size_t states_explored = 0;
};

ReachVerdict check_reachability(const BehaviorNet& b, const std::vector<int>& lifted,
                                const std::vector<std::string>& var_order, const FormulaPtr& f,
                                size_t max_states);

struct PrpBounds {
    int max_steps = 8;
    int max_vertices = 8;
    size_t max_states = 1000000;
};

struct PrpWitness {
    Derivation derivation;
    TermPtr term;
    System system;
    std::vector<int> firing;          // behavior transition ids
    std::vector<std::string> firing_names;
    Valuation valuation;
};

struct PrpResult {
    enum class Status { Positive, NegativeWithinBound, Truncated };
    Status status;
    std::optional<PrpWitness> witness;
    size_t systems_checked = 0;
    size_t states_explored = 0;
    std::string truncation_reason;
};

/// Enumerates the grammar's language within bounds, builds each behavior and
/// checks the reachability formula; first witness in deterministic order.
PrpResult solve_prp(const Grammar& g, const TypeTable& table, const PlaceLabeling& labeling,
                    const FormulaPtr& formula, const PrpBounds& bounds);

/// Variable order used everywhere: labeling range then formula variables,
/// sorted and deduplicated.
std::vector<std::string> variable_order(const PlaceLabeling& labeling, const FormulaPtr& formula);

} // namespace vrhr
