#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vrhr/graph.hpp"
#include "vrhr/petri.hpp"

namespace vrhr {

/// The fixed set of process types of a specification plus the port alphabet.
/// Place and observable-transition names are globally unique across types.
struct TypeTable {
    std::vector<ProcessType> types;
    VertexLabelAlphabet alphabet;

    const ProcessType* find_type(const std::string& name) const;
    const ProcessType& type(const std::string& name) const;
    int type_index(const std::string& name) const;

    /// place name -> (type index, local place index)
    std::map<std::string, std::pair<int, int>> place_home() const;
    /// observable transition name -> (type index, local transition index)
    std::map<std::string, std::pair<int, int>> observable_home() const;

    ValidationReport validate() const;
};

/// A graph whose vertices run process types and whose edges carry rendezvous
/// pairs of observable transitions.
struct System {
    LabeledGraph graph;
    std::vector<std::string> proc;                    // per vertex
    std::vector<std::optional<std::string>> port;     // per vertex

    static System from_graph(const LabeledGraph& g, const TypeTable& table);
};

ValidationReport validate_system(const LabeledGraph& g, const TypeTable& table);

struct BehaviorTransition {
    enum class Origin { Internal, Rendezvous };
    Origin origin;
    int v1;
    int local_t1;       // transition index within proc(v1)
    int v2 = -1;        // rendezvous partner, -1 for internal
    int local_t2 = -1;
    // Resolved behavior place ids; second entry -1 for internal transitions.
    int pre1, post1, pre2 = -1, post2 = -1;
    GraphEdge origin_edge; // meaningful for Rendezvous
};

/// Compact marking of a behavior net: one local place index per vertex.
using State = std::vector<uint8_t>;

/// The product net of a system (Def-style construction): one place per
/// (local place, vertex), transitions from edges and internal transitions.
struct BehaviorNet {
    System system;
    std::vector<int> type_of_vertex;             // index into table.types
    std::vector<int> place_offset;               // behavior place id = offset[v] + local place
    std::vector<std::pair<int, int>> place_info; // behavior place id -> (vertex, local place)
    std::vector<BehaviorTransition> transitions;
    State initial;

    int place_id(int vertex, int local_place) const { return place_offset[vertex] + local_place; }
    int place_count() const { return (int)place_info.size(); }

    Marking marking_of(const State& s) const;
    bool enabled_in(const State& s, const BehaviorTransition& t) const;
    State fire_in(const State& s, const BehaviorTransition& t) const;

    /// Generic Petri net view (places (q,v) named "q@v").
    PetriNet to_petri(const TypeTable& table) const;

    std::string transition_name(const TypeTable& table, int t) const;
};

BehaviorNet build_behavior(const System& s, const TypeTable& table);

/// Place labeling with counting variables, by global place name.
using PlaceLabeling = std::map<std::string, std::string>;

/// L o proj1: behavior place id -> variable index in var_order, -1 unlabeled.
std::vector<int> lift_labeling(const BehaviorNet& b, const TypeTable& table,
                               const PlaceLabeling& labeling,
                               const std::vector<std::string>& var_order);

std::string behavior_to_dot(const BehaviorNet& b, const TypeTable& table,
                            const std::string& name);

} // namespace vrhr
