#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vrhr/report.hpp"

namespace vrhr {

/// Marking as a total map over the net's places (dense by place index).
using Marking = std::vector<uint32_t>;

/// A weighted place/transition net together with its initial marking.
struct PetriNet {
    std::vector<std::string> places;
    std::vector<std::string> transitions;
    // Sparse incidence: per transition, (place index, weight) lists.
    std::vector<std::vector<std::pair<int, uint32_t>>> pre;
    std::vector<std::vector<std::pair<int, uint32_t>>> post;
    Marking initial;

    int add_place(const std::string& name, uint32_t initial_tokens = 0);
    int add_transition(const std::string& name);
    void add_pre(int place, int transition, uint32_t weight = 1);
    void add_post(int transition, int place, uint32_t weight = 1);

    std::optional<int> place_index(const std::string& name) const;
    std::optional<int> transition_index(const std::string& name) const;
};

bool enabled(const PetriNet& n, const Marking& m, int transition);

/// Fires the transition; throws std::runtime_error when not enabled.
Marking fire(const PetriNet& n, const Marking& m, int transition);

struct ReplayResult {
    Marking final;           // marking after the last successful step
    std::optional<int> failed_at;    // index of the first disabled step
    std::string failed_transition;
};

ReplayResult replay(const PetriNet& n, const std::vector<int>& seq);
ReplayResult replay_from(const PetriNet& n, Marking start, const std::vector<int>& seq);

/// A local finite-state process: one-token net with unit weights whose
/// transitions split into observable and internal.
struct ProcessType {
    std::string name;
    PetriNet net;
    std::set<std::string> observable;

    bool is_observable(int t) const { return observable.count(net.transitions[t]) > 0; }
    /// These assume the invariants hold (validate first).
    int pre_place(int t) const;
    int post_place(int t) const;
    int initial_place() const;
    std::optional<int> observable_index(const std::string& t) const;
};

/// Convenience builder: transitions given as (name, from, to, observable).
struct TransitionSpec {
    std::string name, from, to;
    bool observable;
};
ProcessType make_process_type(const std::string& name, const std::vector<std::string>& places,
                              const std::string& initial,
                              const std::vector<TransitionSpec>& transitions);

ValidationReport validate_process_type(const ProcessType& p);

std::string petri_to_dot(const PetriNet& n, const std::string& name,
                         const std::set<std::string>& observable = {});

} // namespace vrhr
