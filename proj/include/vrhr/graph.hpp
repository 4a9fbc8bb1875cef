#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vrhr/report.hpp"

namespace vrhr {

using Vertex = int32_t;
using Label = std::string;     // vertex label: a port or a process type name
using EdgeLabel = std::string; // plain label like "a", or a pair encoded "t,t'"

// Pair edge labels encode a rendezvous between two observable transitions.
EdgeLabel make_pair_label(const std::string& t1, const std::string& t2);
std::optional<std::pair<std::string, std::string>> split_pair_label(const EdgeLabel& l);

struct GraphEdge {
    Vertex src;
    EdgeLabel label;
    Vertex dst;

    auto operator<=>(const GraphEdge&) const = default;
};

/// The vertex-label alphabet Lambda = process types + ports, with the
/// port -> process type assignment.
struct VertexLabelAlphabet {
    std::set<std::string> process_types;
    std::map<std::string, std::string> port_type; // port -> its process type

    bool is_port(const Label& l) const { return port_type.count(l) > 0; }
    ValidationReport validate() const;
};

/// A finite directed graph with label sets on vertices. Vertex ids are dense
/// integers scoped to one graph; operations that combine graphs re-index.
struct LabeledGraph {
    int32_t vertex_count = 0;
    std::vector<GraphEdge> edges;         // kept sorted and duplicate-free
    std::vector<std::set<Label>> labels;  // one set per vertex

    Vertex add_vertex(std::set<Label> ls = {});
    void add_edge(Vertex src, const EdgeLabel& l, Vertex dst);
    bool has_edge(Vertex src, const EdgeLabel& l, Vertex dst) const;
    void normalize(); // sort + dedupe edges

    /// Ports occurring in the labels of this graph (the sort).
    std::set<std::string> sort_of(const VertexLabelAlphabet& alphabet) const;
    std::optional<std::string> port_of(Vertex v, const VertexLabelAlphabet& alphabet) const;

    bool operator==(const LabeledGraph&) const = default;
};

/// The epsilon alphabet: forward routing labels, their reverses, and the
/// pairing bijection between them.
struct EpsilonAlphabet {
    std::map<EdgeLabel, EdgeLabel> forward_to_backward;

    bool is_forward(const EdgeLabel& l) const { return forward_to_backward.count(l) > 0; }
    bool is_backward(const EdgeLabel& l) const;
    ValidationReport validate_against(const std::set<EdgeLabel>& delta) const;
};

ValidationReport validate_graph(const LabeledGraph& g, const VertexLabelAlphabet& alphabet);

/// True iff every port labels at most one vertex (the HR graph domain).
bool is_hr_graph(const LabeledGraph& g, const VertexLabelAlphabet& alphabet);

/// Checks reverse-edge pairing and the forest condition: every vertex with an
/// incoming forward epsilon edge has at most one outgoing forward epsilon
/// edge, and the forward relation is acyclic. Vertices without incoming
/// epsilon edges (the routed leaves) may point at several trees.
ValidationReport validate_epsilon_graph(const LabeledGraph& g, const EpsilonAlphabet& eps);

/// Expansion: drops every vertex targeted by a forward epsilon edge and
/// shortcuts plain edges along epsilon paths (the empty path counts).
/// Throws std::runtime_error if validate_epsilon_graph fails.
LabeledGraph expand(const LabeledGraph& g, const EpsilonAlphabet& eps);

/// Adds the missing reverse edge for every forward epsilon edge.
LabeledGraph add_reverse_epsilon_edges(const LabeledGraph& g, const EpsilonAlphabet& eps);

/// Label- and edge-preserving bijection between the two graphs, if one
/// exists. Throws std::runtime_error above the vertex cap.
std::optional<std::vector<Vertex>> isomorphism(const LabeledGraph& g1, const LabeledGraph& g2,
                                               int max_vertices = 64);

bool isomorphic(const LabeledGraph& g1, const LabeledGraph& g2, int max_vertices = 64);

/// Deterministic DOT rendering; epsilon edges styled dashed when eps given.
std::string graph_to_dot(const LabeledGraph& g, const std::string& name = "g",
                         const EpsilonAlphabet* eps = nullptr);

} // namespace vrhr
