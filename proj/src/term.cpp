#include "vrhr/term.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace vrhr {

namespace {
TermPtr make(Term t) { return std::make_shared<const Term>(std::move(t)); }
} // namespace

TermPtr mk_union(TermPtr l, TermPtr r) {
    Term t;
    t.kind = Term::Kind::Union;
    t.left = std::move(l);
    t.right = std::move(r);
    return make(std::move(t));
}

TermPtr mk_compose(TermPtr l, TermPtr r) {
    Term t;
    t.kind = Term::Kind::Compose;
    t.left = std::move(l);
    t.right = std::move(r);
    return make(std::move(t));
}

TermPtr mk_add_edge(EdgeLabel label, std::string p1, std::string p2, TermPtr child) {
    Term t;
    t.kind = Term::Kind::AddEdge;
    t.edge_label = std::move(label);
    t.port1 = std::move(p1);
    t.port2 = std::move(p2);
    t.left = std::move(child);
    return make(std::move(t));
}

TermPtr mk_relab(std::vector<std::pair<std::string, std::string>> map, TermPtr child) {
    std::sort(map.begin(), map.end());
    Term t;
    t.kind = Term::Kind::Relab;
    t.relab_map = std::move(map);
    t.left = std::move(child);
    return make(std::move(t));
}

TermPtr mk_vertex(std::string port) {
    Term t;
    t.kind = Term::Kind::Vertex;
    t.port1 = std::move(port);
    return make(std::move(t));
}

TermPtr mk_edge(EdgeLabel label, std::string p1, std::string p2) {
    Term t;
    t.kind = Term::Kind::Edge;
    t.edge_label = std::move(label);
    t.port1 = std::move(p1);
    t.port2 = std::move(p2);
    return make(std::move(t));
}

TermPtr mk_nonterminal(std::string name) {
    Term t;
    t.kind = Term::Kind::Nonterminal;
    t.nonterminal = std::move(name);
    return make(std::move(t));
}

bool is_ground(const TermPtr& t) {
    if (!t)
        return true;
    if (t->kind == Term::Kind::Nonterminal)
        return false;
    return is_ground(t->left) && is_ground(t->right);
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
    if (a == b)
        return true;
    if (!a || !b)
        return false;
    if (a->kind != b->kind || a->edge_label != b->edge_label || a->port1 != b->port1 ||
        a->port2 != b->port2 || a->relab_map != b->relab_map || a->nonterminal != b->nonterminal)
        return false;
    return term_equal(a->left, b->left) && term_equal(a->right, b->right);
}

int count_nonterminals(const TermPtr& t) {
    if (!t)
        return 0;
    int n = t->kind == Term::Kind::Nonterminal ? 1 : 0;
    return n + count_nonterminals(t->left) + count_nonterminals(t->right);
}

int count_vertex_leaves(const TermPtr& t) {
    if (!t)
        return 0;
    int n = t->kind == Term::Kind::Vertex ? 1 : 0;
    return n + count_vertex_leaves(t->left) + count_vertex_leaves(t->right);
}

std::string print_term(const TermPtr& t) {
    std::ostringstream os;
    std::function<void(const TermPtr&)> pr = [&](const TermPtr& u) {
        switch (u->kind) {
        case Term::Kind::Union:
            os << "union(";
            pr(u->left);
            os << ", ";
            pr(u->right);
            os << ")";
            break;
        case Term::Kind::Compose:
            os << "compose(";
            pr(u->left);
            os << ", ";
            pr(u->right);
            os << ")";
            break;
        case Term::Kind::AddEdge: {
            auto pair = split_pair_label(u->edge_label);
            os << "add_edge[";
            if (pair)
                os << "(" << pair->first << "," << pair->second << ")";
            else
                os << u->edge_label;
            os << "; " << u->port1 << " -> " << u->port2 << "](";
            pr(u->left);
            os << ")";
            break;
        }
        case Term::Kind::Relab: {
            os << "relab[";
            bool first = true;
            for (const auto& [a, b] : u->relab_map) {
                if (!first)
                    os << ", ";
                os << a << " -> " << b;
                first = false;
            }
            os << "](";
            pr(u->left);
            os << ")";
            break;
        }
        case Term::Kind::Vertex:
            os << "vertex[" << u->port1 << "]";
            break;
        case Term::Kind::Edge: {
            auto pair = split_pair_label(u->edge_label);
            os << "edge[";
            if (pair)
                os << "(" << pair->first << "," << pair->second << ")";
            else
                os << u->edge_label;
            os << "; " << u->port1 << " -> " << u->port2 << "]";
            break;
        }
        case Term::Kind::Nonterminal:
            os << u->nonterminal;
            break;
        }
    };
    pr(t);
    return os.str();
}

PortSet infer_sort(const TermPtr& t, const VertexLabelAlphabet& alphabet,
                   const std::vector<PortSet>& nt_sorts) {
    int next_nt = 0;
    std::function<PortSet(const TermPtr&)> go = [&](const TermPtr& u) -> PortSet {
        switch (u->kind) {
        case Term::Kind::Vertex:
            return {u->port1};
        case Term::Kind::Edge:
            return {u->port1, u->port2};
        case Term::Kind::Union:
        case Term::Kind::Compose: {
            PortSet s = go(u->left);
            PortSet r = go(u->right);
            s.insert(r.begin(), r.end());
            return s;
        }
        case Term::Kind::AddEdge:
            return go(u->left);
        case Term::Kind::Relab: {
            PortSet child = go(u->left);
            PortSet out;
            for (const auto& p : child) {
                auto it = std::find_if(u->relab_map.begin(), u->relab_map.end(),
                                       [&](const auto& m) { return m.first == p; });
                if (it != u->relab_map.end()) {
                    auto a = alphabet.port_type.find(p);
                    auto b = alphabet.port_type.find(it->second);
                    if (a == alphabet.port_type.end() || b == alphabet.port_type.end() ||
                        a->second != b->second)
                        throw std::runtime_error("relab is not type-preserving on port '" + p + "'");
                    out.insert(it->second);
                }
            }
            return out;
        }
        case Term::Kind::Nonterminal: {
            if (next_nt >= (int)nt_sorts.size())
                throw std::runtime_error("infer_sort: term is not ground (nonterminal '" +
                                         u->nonterminal + "')");
            return nt_sorts[next_nt++];
        }
        }
        throw std::logic_error("unreachable");
    };
    return go(t);
}

ValidationReport validate_term(const TermPtr& t, const VertexLabelAlphabet& alphabet,
                               Algebra algebra, bool strict_add_edge) {
    ValidationReport rep;
    std::function<void(const TermPtr&)> go = [&](const TermPtr& u) {
        switch (u->kind) {
        case Term::Kind::Union:
            if (algebra != Algebra::VR)
                rep.add("union is a VR operation");
            go(u->left);
            go(u->right);
            break;
        case Term::Kind::Compose:
            if (algebra != Algebra::HR)
                rep.add("compose is an HR operation");
            go(u->left);
            go(u->right);
            break;
        case Term::Kind::AddEdge: {
            if (algebra != Algebra::VR)
                rep.add("add_edge is a VR operation");
            if (u->port1 == u->port2)
                rep.add("add_edge requires two distinct ports, got '" + u->port1 + "' twice");
            for (const auto& p : {u->port1, u->port2})
                if (!alphabet.is_port(p))
                    rep.add("add_edge uses undeclared port '" + p + "'");
            if (strict_add_edge && is_ground(u->left)) {
                PortSet s = infer_sort(u->left, alphabet);
                for (const auto& p : {u->port1, u->port2})
                    if (alphabet.is_port(p) && !s.count(p))
                        rep.add("dangling add-edge port " + p +
                                ": not in the argument's sort");
            }
            go(u->left);
            break;
        }
        case Term::Kind::Relab: {
            std::set<std::string> targets;
            std::set<std::string> sources;
            for (const auto& [a, b] : u->relab_map) {
                if (!sources.insert(a).second)
                    rep.add("relab maps port '" + a + "' twice");
                auto ia = alphabet.port_type.find(a);
                auto ib = alphabet.port_type.find(b);
                if (ia == alphabet.port_type.end())
                    rep.add("relab uses undeclared port '" + a + "'");
                else if (ib == alphabet.port_type.end())
                    rep.add("relab uses undeclared port '" + b + "'");
                else if (ia->second != ib->second)
                    rep.add("relab [" + a + " -> " + b + "] is not type-preserving");
                if (!targets.insert(b).second && algebra == Algebra::HR)
                    rep.add("HR relab must be injective, port '" + b + "' targeted twice");
            }
            go(u->left);
            break;
        }
        case Term::Kind::Vertex:
            if (!alphabet.is_port(u->port1))
                rep.add("vertex uses undeclared port '" + u->port1 + "'");
            break;
        case Term::Kind::Edge:
            if (algebra != Algebra::HR)
                rep.add("edge is an HR operation");
            if (u->port1 == u->port2)
                rep.add("edge requires two distinct ports, got '" + u->port1 + "' twice");
            for (const auto& p : {u->port1, u->port2})
                if (!alphabet.is_port(p))
                    rep.add("edge uses undeclared port '" + p + "'");
            break;
        case Term::Kind::Nonterminal:
            break;
        }
    };
    go(t);
    return rep;
}

namespace {

// Disjoint union; the right operand's vertices are re-indexed after the left.
LabeledGraph disjoint_union(const LabeledGraph& a, const LabeledGraph& b) {
    LabeledGraph out = a;
    for (Vertex v = 0; v < b.vertex_count; ++v)
        out.add_vertex(b.labels[v]);
    for (const auto& e : b.edges)
        out.add_edge(e.src + a.vertex_count, e.label, e.dst + a.vertex_count);
    out.normalize();
    return out;
}

LabeledGraph single_vertex(const std::string& port, const VertexLabelAlphabet& alphabet) {
    auto it = alphabet.port_type.find(port);
    if (it == alphabet.port_type.end())
        throw std::runtime_error("vertex uses undeclared port '" + port + "'");
    LabeledGraph g;
    g.add_vertex({port, it->second});
    return g;
}

LabeledGraph apply_relab(const LabeledGraph& g,
                         const std::vector<std::pair<std::string, std::string>>& map,
                         const VertexLabelAlphabet& alphabet) {
    LabeledGraph out = g;
    for (Vertex v = 0; v < out.vertex_count; ++v) {
        std::set<Label> next;
        for (const auto& l : out.labels[v]) {
            if (!alphabet.is_port(l)) {
                next.insert(l);
                continue;
            }
            auto it = std::find_if(map.begin(), map.end(),
                                   [&](const auto& m) { return m.first == l; });
            if (it != map.end())
                next.insert(it->second); // undefined entries are erased
        }
        out.labels[v] = std::move(next);
    }
    return out;
}

void check_hr_domain(const LabeledGraph& g, const VertexLabelAlphabet& alphabet,
                     const char* where) {
    if (!is_hr_graph(g, alphabet))
        throw std::runtime_error(std::string(where) +
                                 ": intermediate value leaves the HR domain "
                                 "(a port labels two vertices)");
}

} // namespace

LabeledGraph eval_vr(const TermPtr& t, const VertexLabelAlphabet& alphabet) {
    switch (t->kind) {
    case Term::Kind::Vertex:
        return single_vertex(t->port1, alphabet);
    case Term::Kind::Union:
        return disjoint_union(eval_vr(t->left, alphabet), eval_vr(t->right, alphabet));
    case Term::Kind::AddEdge: {
        LabeledGraph g = eval_vr(t->left, alphabet);
        std::vector<Vertex> p1, p2;
        for (Vertex v = 0; v < g.vertex_count; ++v) {
            if (g.labels[v].count(t->port1))
                p1.push_back(v);
            if (g.labels[v].count(t->port2))
                p2.push_back(v);
        }
        for (Vertex a : p1)
            for (Vertex b : p2)
                g.add_edge(a, t->edge_label, b);
        g.normalize();
        return g;
    }
    case Term::Kind::Relab:
        return apply_relab(eval_vr(t->left, alphabet), t->relab_map, alphabet);
    case Term::Kind::Nonterminal:
        throw std::runtime_error("eval_vr: term is not ground (nonterminal '" + t->nonterminal +
                                 "')");
    case Term::Kind::Compose:
    case Term::Kind::Edge:
        throw std::runtime_error("eval_vr: HR operation in a VR term");
    }
    throw std::logic_error("unreachable");
}

namespace {

// HR composition: disjoint union, then fuse the unique pi-vertices of the two
// operands for every shared port pi.
LabeledGraph compose(const LabeledGraph& a, const LabeledGraph& b,
                     const VertexLabelAlphabet& alphabet) {
    std::map<std::string, Vertex> port_in_a, port_in_b;
    for (Vertex v = 0; v < a.vertex_count; ++v)
        for (const auto& l : a.labels[v])
            if (alphabet.is_port(l))
                port_in_a[l] = v;
    for (Vertex v = 0; v < b.vertex_count; ++v)
        for (const auto& l : b.labels[v])
            if (alphabet.is_port(l))
                port_in_b[l] = v;

    // b vertex -> fused a vertex, where defined.
    std::map<Vertex, Vertex> fuse;
    for (const auto& [port, bv] : port_in_b) {
        auto it = port_in_a.find(port);
        if (it != port_in_a.end())
            fuse[bv] = it->second;
    }

    LabeledGraph out;
    std::vector<Vertex> remap_a(a.vertex_count), remap_b(b.vertex_count, -1);
    for (Vertex v = 0; v < a.vertex_count; ++v)
        remap_a[v] = out.add_vertex(a.labels[v]);
    for (Vertex v = 0; v < b.vertex_count; ++v) {
        auto it = fuse.find(v);
        if (it != fuse.end()) {
            remap_b[v] = remap_a[it->second];
            for (const auto& l : b.labels[v])
                out.labels[remap_b[v]].insert(l);
        } else {
            remap_b[v] = out.add_vertex(b.labels[v]);
        }
    }
    for (const auto& e : a.edges)
        out.add_edge(remap_a[e.src], e.label, remap_a[e.dst]);
    for (const auto& e : b.edges)
        out.add_edge(remap_b[e.src], e.label, remap_b[e.dst]);
    out.normalize();
    return out;
}

} // namespace

LabeledGraph eval_hr(const TermPtr& t, const VertexLabelAlphabet& alphabet) {
    switch (t->kind) {
    case Term::Kind::Vertex:
        return single_vertex(t->port1, alphabet);
    case Term::Kind::Edge: {
        LabeledGraph g;
        Vertex a = g.add_vertex({t->port1, alphabet.port_type.at(t->port1)});
        Vertex b = g.add_vertex({t->port2, alphabet.port_type.at(t->port2)});
        g.add_edge(a, t->edge_label, b);
        return g;
    }
    case Term::Kind::Compose: {
        LabeledGraph l = eval_hr(t->left, alphabet);
        LabeledGraph r = eval_hr(t->right, alphabet);
        LabeledGraph out = compose(l, r, alphabet);
        check_hr_domain(out, alphabet, "compose");
        return out;
    }
    case Term::Kind::Relab: {
        std::set<std::string> targets;
        for (const auto& [a, b] : t->relab_map)
            if (!targets.insert(b).second)
                throw std::runtime_error("HR relab must be injective");
        LabeledGraph out = apply_relab(eval_hr(t->left, alphabet), t->relab_map, alphabet);
        check_hr_domain(out, alphabet, "relab");
        return out;
    }
    case Term::Kind::Nonterminal:
        throw std::runtime_error("eval_hr: term is not ground (nonterminal '" + t->nonterminal +
                                 "')");
    case Term::Kind::Union:
    case Term::Kind::AddEdge:
        throw std::runtime_error("eval_hr: VR operation in an HR term");
    }
    throw std::logic_error("unreachable");
}

LabeledGraph eval_term(const TermPtr& t, Algebra algebra, const VertexLabelAlphabet& alphabet) {
    return algebra == Algebra::VR ? eval_vr(t, alphabet) : eval_hr(t, alphabet);
}

} // namespace vrhr
