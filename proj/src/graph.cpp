#include "vrhr/graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace vrhr {

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    for (const auto& v : items)
        os << v.message << "\n";
    return os.str();
}

EdgeLabel make_pair_label(const std::string& t1, const std::string& t2) {
    return t1 + "," + t2;
}

std::optional<std::pair<std::string, std::string>> split_pair_label(const EdgeLabel& l) {
    auto pos = l.find(',');
    if (pos == std::string::npos || l.find(',', pos + 1) != std::string::npos)
        return std::nullopt;
    return std::make_pair(l.substr(0, pos), l.substr(pos + 1));
}

ValidationReport VertexLabelAlphabet::validate() const {
    ValidationReport rep;
    for (const auto& [port, type] : port_type) {
        if (process_types.count(port))
            rep.add("label '" + port + "' is both a port and a process type");
        if (!process_types.count(type))
            rep.add("port '" + port + "' maps to unknown process type '" + type + "'");
    }
    return rep;
}

Vertex LabeledGraph::add_vertex(std::set<Label> ls) {
    labels.push_back(std::move(ls));
    return vertex_count++;
}

void LabeledGraph::add_edge(Vertex src, const EdgeLabel& l, Vertex dst) {
    GraphEdge e{src, l, dst};
    auto it = std::lower_bound(edges.begin(), edges.end(), e);
    if (it != edges.end() && *it == e)
        return;
    edges.insert(it, e);
}

bool LabeledGraph::has_edge(Vertex src, const EdgeLabel& l, Vertex dst) const {
    GraphEdge e{src, l, dst};
    return std::binary_search(edges.begin(), edges.end(), e);
}

void LabeledGraph::normalize() {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

std::set<std::string> LabeledGraph::sort_of(const VertexLabelAlphabet& alphabet) const {
    std::set<std::string> ports;
    for (const auto& ls : labels)
        for (const auto& l : ls)
            if (alphabet.is_port(l))
                ports.insert(l);
    return ports;
}

std::optional<std::string> LabeledGraph::port_of(Vertex v, const VertexLabelAlphabet& alphabet) const {
    for (const auto& l : labels[v])
        if (alphabet.is_port(l))
            return l;
    return std::nullopt;
}

bool EpsilonAlphabet::is_backward(const EdgeLabel& l) const {
    for (const auto& [f, b] : forward_to_backward)
        if (b == l)
            return true;
    return false;
}

ValidationReport EpsilonAlphabet::validate_against(const std::set<EdgeLabel>& delta) const {
    ValidationReport rep;
    std::set<EdgeLabel> backwards;
    for (const auto& [f, b] : forward_to_backward) {
        if (f == b)
            rep.add("epsilon label '" + f + "' pairs with itself");
        if (forward_to_backward.count(b))
            rep.add("label '" + b + "' is both forward and backward");
        if (!backwards.insert(b).second)
            rep.add("backward label '" + b + "' paired twice");
        if (delta.count(f))
            rep.add("forward label '" + f + "' collides with a plain edge label");
        if (delta.count(b))
            rep.add("backward label '" + b + "' collides with a plain edge label");
    }
    return rep;
}

ValidationReport validate_graph(const LabeledGraph& g, const VertexLabelAlphabet& alphabet) {
    ValidationReport rep;
    if ((size_t)g.vertex_count != g.labels.size())
        rep.add("vertex count does not match label table size");
    for (const auto& e : g.edges) {
        if (e.src < 0 || e.src >= g.vertex_count || e.dst < 0 || e.dst >= g.vertex_count)
            rep.add("edge endpoint out of range");
        else if (e.src == e.dst)
            rep.add("self-loop at vertex " + std::to_string(e.src));
    }
    for (Vertex v = 0; v < g.vertex_count && (size_t)v < g.labels.size(); ++v) {
        std::vector<std::string> ports;
        for (const auto& l : g.labels[v])
            if (alphabet.is_port(l))
                ports.push_back(l);
        if (ports.size() > 1)
            rep.add("two ports on one vertex " + std::to_string(v) + " (" + ports[0] + ", " + ports[1] + ")");
        for (const auto& p : ports)
            if (!g.labels[v].count(alphabet.port_type.at(p)))
                rep.add("vertex " + std::to_string(v) + " carries port '" + p +
                        "' without its process type '" + alphabet.port_type.at(p) + "'");
    }
    return rep;
}

bool is_hr_graph(const LabeledGraph& g, const VertexLabelAlphabet& alphabet) {
    std::map<std::string, int> seen;
    for (Vertex v = 0; v < g.vertex_count; ++v)
        for (const auto& l : g.labels[v])
            if (alphabet.is_port(l) && ++seen[l] > 1)
                return false;
    return true;
}

ValidationReport validate_epsilon_graph(const LabeledGraph& g, const EpsilonAlphabet& eps) {
    ValidationReport rep;
    for (const auto& e : g.edges) {
        if (eps.is_forward(e.label)) {
            if (!g.has_edge(e.dst, eps.forward_to_backward.at(e.label), e.src))
                rep.add("forward edge " + std::to_string(e.src) + " -" + e.label + "-> " +
                        std::to_string(e.dst) + " has no paired reverse edge");
        } else if (eps.is_backward(e.label)) {
            EdgeLabel fwd;
            for (const auto& [f, b] : eps.forward_to_backward)
                if (b == e.label)
                    fwd = f;
            if (!g.has_edge(e.dst, fwd, e.src))
                rep.add("reverse edge " + std::to_string(e.src) + " -" + e.label + "-> " +
                        std::to_string(e.dst) + " has no paired forward edge");
        }
    }

    // Forest over the vertices with incoming forward edges.
    std::vector<char> in_forest(g.vertex_count, 0);
    for (const auto& e : g.edges)
        if (eps.is_forward(e.label))
            in_forest[e.dst] = 1;
    std::vector<int> out_degree(g.vertex_count, 0);
    for (const auto& e : g.edges)
        if (eps.is_forward(e.label))
            out_degree[e.src]++;
    for (Vertex v = 0; v < g.vertex_count; ++v)
        if (in_forest[v] && out_degree[v] > 1)
            rep.add("non-unique parent: vertex " + std::to_string(v) + " has " +
                    std::to_string(out_degree[v]) + " outgoing epsilon edges");

    // Acyclicity of the forward relation.
    std::vector<std::vector<Vertex>> succ(g.vertex_count);
    for (const auto& e : g.edges)
        if (eps.is_forward(e.label))
            succ[e.src].push_back(e.dst);
    std::vector<int> color(g.vertex_count, 0); // 0 white, 1 gray, 2 black
    std::function<bool(Vertex)> has_cycle = [&](Vertex v) {
        color[v] = 1;
        for (Vertex w : succ[v]) {
            if (color[w] == 1)
                return true;
            if (color[w] == 0 && has_cycle(w))
                return true;
        }
        color[v] = 2;
        return false;
    };
    for (Vertex v = 0; v < g.vertex_count; ++v)
        if (color[v] == 0 && has_cycle(v)) {
            rep.add("cycle in the epsilon edge relation through vertex " + std::to_string(v));
            break;
        }
    return rep;
}

LabeledGraph add_reverse_epsilon_edges(const LabeledGraph& g, const EpsilonAlphabet& eps) {
    LabeledGraph out = g;
    for (const auto& e : g.edges)
        if (eps.is_forward(e.label))
            out.add_edge(e.dst, eps.forward_to_backward.at(e.label), e.src);
    out.normalize();
    return out;
}

LabeledGraph expand(const LabeledGraph& g, const EpsilonAlphabet& eps) {
    ValidationReport rep = validate_epsilon_graph(g, eps);
    if (!rep.ok())
        throw std::runtime_error("expand: not a valid epsilon graph:\n" + rep.to_string());

    std::vector<char> removed(g.vertex_count, 0);
    for (const auto& e : g.edges)
        if (eps.is_forward(e.label))
            removed[e.dst] = 1;

    // reach[v] = vertices reachable from v along forward epsilon edges.
    std::vector<std::set<Vertex>> reach(g.vertex_count);
    std::vector<std::vector<Vertex>> succ(g.vertex_count);
    for (const auto& e : g.edges)
        if (eps.is_forward(e.label))
            succ[e.src].push_back(e.dst);
    for (Vertex v = 0; v < g.vertex_count; ++v) {
        std::vector<Vertex> stack{v};
        while (!stack.empty()) {
            Vertex u = stack.back();
            stack.pop_back();
            if (!reach[v].insert(u).second)
                continue;
            for (Vertex w : succ[u])
                stack.push_back(w);
        }
    }

    LabeledGraph out;
    std::vector<Vertex> remap(g.vertex_count, -1);
    for (Vertex v = 0; v < g.vertex_count; ++v)
        if (!removed[v])
            remap[v] = out.add_vertex(g.labels[v]);

    for (const auto& e : g.edges) {
        if (eps.is_forward(e.label) || eps.is_backward(e.label))
            continue;
        for (Vertex v1 = 0; v1 < g.vertex_count; ++v1) {
            if (removed[v1] || !reach[v1].count(e.src))
                continue;
            for (Vertex v2 = 0; v2 < g.vertex_count; ++v2) {
                if (removed[v2] || !reach[v2].count(e.dst))
                    continue;
                if (remap[v1] == remap[v2])
                    throw std::runtime_error("expand would create a self-loop at vertex " +
                                             std::to_string(v1));
                out.add_edge(remap[v1], e.label, remap[v2]);
            }
        }
    }
    out.normalize();
    return out;
}

namespace {

// Degree/label signature used to prune the isomorphism search.
struct VertexSig {
    std::set<Label> labels;
    std::multiset<EdgeLabel> out_labels;
    std::multiset<EdgeLabel> in_labels;

    auto operator<=>(const VertexSig&) const = default;
};

std::vector<VertexSig> signatures(const LabeledGraph& g) {
    std::vector<VertexSig> sig(g.vertex_count);
    for (Vertex v = 0; v < g.vertex_count; ++v)
        sig[v].labels = g.labels[v];
    for (const auto& e : g.edges) {
        sig[e.src].out_labels.insert(e.label);
        sig[e.dst].in_labels.insert(e.label);
    }
    return sig;
}

} // namespace

std::optional<std::vector<Vertex>> isomorphism(const LabeledGraph& g1, const LabeledGraph& g2,
                                               int max_vertices) {
    if (g1.vertex_count > max_vertices || g2.vertex_count > max_vertices)
        throw std::runtime_error("isomorphism: graph exceeds the " +
                                 std::to_string(max_vertices) + "-vertex cap");
    if (g1.vertex_count != g2.vertex_count || g1.edges.size() != g2.edges.size())
        return std::nullopt;

    auto sig1 = signatures(g1);
    auto sig2 = signatures(g2);
    {
        auto s1 = sig1;
        auto s2 = sig2;
        std::sort(s1.begin(), s1.end());
        std::sort(s2.begin(), s2.end());
        if (s1 != s2)
            return std::nullopt;
    }

    int n = g1.vertex_count;
    // Order g1 vertices by signature class size to fail fast.
    std::map<VertexSig, std::vector<Vertex>> cls2;
    for (Vertex v = 0; v < n; ++v)
        cls2[sig2[v]].push_back(v);
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
        return cls2[sig1[a]].size() < cls2[sig1[b]].size();
    });

    std::vector<Vertex> map1(n, -1), map2(n, -1);

    // Adjacency for incremental consistency checks.
    auto edge_map = [](const LabeledGraph& g) {
        std::map<std::pair<Vertex, Vertex>, std::multiset<EdgeLabel>> m;
        for (const auto& e : g.edges)
            m[{e.src, e.dst}].insert(e.label);
        return m;
    };
    auto em1 = edge_map(g1);
    auto em2 = edge_map(g2);

    std::function<bool(int)> try_assign = [&](int idx) {
        if (idx == n)
            return true;
        Vertex v = order[idx];
        for (Vertex w : cls2[sig1[v]]) {
            if (map2[w] != -1)
                continue;
            bool ok = true;
            for (Vertex u = 0; u < n && ok; ++u) {
                if (map1[u] == -1)
                    continue;
                auto it1 = em1.find({v, u});
                auto it2 = em2.find({w, map1[u]});
                if ((it1 == em1.end()) != (it2 == em2.end()) ||
                    (it1 != em1.end() && it1->second != it2->second))
                    ok = false;
                if (!ok)
                    break;
                it1 = em1.find({u, v});
                it2 = em2.find({map1[u], w});
                if ((it1 == em1.end()) != (it2 == em2.end()) ||
                    (it1 != em1.end() && it1->second != it2->second))
                    ok = false;
            }
            // self edges cannot exist; labels already matched by signature
            if (!ok)
                continue;
            map1[v] = w;
            map2[w] = v;
            if (try_assign(idx + 1))
                return true;
            map1[v] = -1;
            map2[w] = -1;
        }
        return false;
    };

    if (try_assign(0))
        return map1;
    return std::nullopt;
}

bool isomorphic(const LabeledGraph& g1, const LabeledGraph& g2, int max_vertices) {
    return isomorphism(g1, g2, max_vertices).has_value();
}

std::string graph_to_dot(const LabeledGraph& g, const std::string& name,
                         const EpsilonAlphabet* eps) {
    std::ostringstream os;
    os << "digraph \"" << name << "\" {\n";
    for (Vertex v = 0; v < g.vertex_count; ++v) {
        os << "  v" << v << " [label=\"v" << v << " {";
        bool first = true;
        for (const auto& l : g.labels[v]) {
            if (!first)
                os << ",";
            os << l;
            first = false;
        }
        os << "}\"];\n";
    }
    for (const auto& e : g.edges) {
        os << "  v" << e.src << " -> v" << e.dst << " [label=\"" << e.label << "\"";
        if (eps && (eps->is_forward(e.label) || eps->is_backward(e.label)))
            os << ", style=dashed";
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace vrhr
