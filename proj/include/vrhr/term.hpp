#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vrhr/graph.hpp"

namespace vrhr {

enum class Algebra { VR, HR };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// One node of a VR or HR operation tree. Which kinds are legal depends on
/// the algebra: Union/AddEdge for VR, Compose/Edge for HR; Relab, Vertex and
/// Nonterminal are shared.
struct Term {
    enum class Kind { Union, Compose, AddEdge, Relab, Vertex, Edge, Nonterminal };

    Kind kind;
    EdgeLabel edge_label;                                        // AddEdge, Edge
    std::string port1, port2;                                    // AddEdge/Edge: pi1, pi2; Vertex: port1
    std::vector<std::pair<std::string, std::string>> relab_map;  // sorted by source port
    std::string nonterminal;                                     // Nonterminal
    TermPtr left, right;                                         // right only for Union/Compose
};

TermPtr mk_union(TermPtr l, TermPtr r);
TermPtr mk_compose(TermPtr l, TermPtr r);
TermPtr mk_add_edge(EdgeLabel label, std::string p1, std::string p2, TermPtr child);
TermPtr mk_relab(std::vector<std::pair<std::string, std::string>> map, TermPtr child);
TermPtr mk_vertex(std::string port);
TermPtr mk_edge(EdgeLabel label, std::string p1, std::string p2);
TermPtr mk_nonterminal(std::string name);

bool is_ground(const TermPtr& t);
bool term_equal(const TermPtr& a, const TermPtr& b);

/// Number of nonterminal occurrences, counted in preorder.
int count_nonterminals(const TermPtr& t);

/// Number of Vertex leaves (lower bound on the VR value's vertex count).
int count_vertex_leaves(const TermPtr& t);

/// Prints in the spec-file surface syntax.
std::string print_term(const TermPtr& t);

using PortSet = std::set<std::string>;

/// Sort of the value, computed without evaluating. Nonterminal occurrences
/// take their sorts from nt_sorts in preorder occurrence order (empty means
/// the term must be ground). Throws on ill-typed relabelings.
PortSet infer_sort(const TermPtr& t, const VertexLabelAlphabet& alphabet,
                   const std::vector<PortSet>& nt_sorts = {});

/// Static well-formedness. strict_add_edge additionally requires both ports
/// of every AddEdge to occur in the child's sort (only checkable on ground
/// subterms).
ValidationReport validate_term(const TermPtr& t, const VertexLabelAlphabet& alphabet,
                               Algebra algebra, bool strict_add_edge = true);

/// Interprets a ground term in the VR algebra. AddEdge over a port missing
/// from the argument's sort adds nothing.
LabeledGraph eval_vr(const TermPtr& t, const VertexLabelAlphabet& alphabet);

/// Interprets a ground term in the HR algebra; every intermediate value must
/// keep each port on at most one vertex.
LabeledGraph eval_hr(const TermPtr& t, const VertexLabelAlphabet& alphabet);

LabeledGraph eval_term(const TermPtr& t, Algebra algebra, const VertexLabelAlphabet& alphabet);

} // namespace vrhr
