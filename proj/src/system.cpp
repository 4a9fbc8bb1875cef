#include "vrhr/system.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace vrhr {

const ProcessType* TypeTable::find_type(const std::string& name) const {
    for (const auto& p : types)
        if (p.name == name)
            return &p;
    return nullptr;
}

const ProcessType& TypeTable::type(const std::string& name) const {
    const ProcessType* p = find_type(name);
    if (!p)
        throw std::runtime_error("unknown process type '" + name + "'");
    return *p;
}

int TypeTable::type_index(const std::string& name) const {
    for (size_t i = 0; i < types.size(); ++i)
        if (types[i].name == name)
            return (int)i;
    throw std::runtime_error("unknown process type '" + name + "'");
}

std::map<std::string, std::pair<int, int>> TypeTable::place_home() const {
    std::map<std::string, std::pair<int, int>> m;
    for (size_t i = 0; i < types.size(); ++i)
        for (size_t q = 0; q < types[i].net.places.size(); ++q)
            m[types[i].net.places[q]] = {(int)i, (int)q};
    return m;
}

std::map<std::string, std::pair<int, int>> TypeTable::observable_home() const {
    std::map<std::string, std::pair<int, int>> m;
    for (size_t i = 0; i < types.size(); ++i)
        for (size_t t = 0; t < types[i].net.transitions.size(); ++t)
            if (types[i].is_observable((int)t))
                m[types[i].net.transitions[t]] = {(int)i, (int)t};
    return m;
}

ValidationReport TypeTable::validate() const {
    ValidationReport rep;
    std::map<std::string, std::string> place_owner, trans_owner;
    std::set<std::string> names;
    for (const auto& p : types) {
        if (!names.insert(p.name).second)
            rep.add("duplicate process type '" + p.name + "'");
        ValidationReport r = validate_process_type(p);
        for (auto& v : r.items)
            rep.add(v.message);
        for (const auto& q : p.net.places) {
            auto [it, fresh] = place_owner.insert({q, p.name});
            if (!fresh)
                rep.add("place '" + q + "' declared by both '" + it->second + "' and '" + p.name +
                        "'");
        }
        for (const auto& t : p.net.transitions) {
            auto [it, fresh] = trans_owner.insert({t, p.name});
            if (!fresh)
                rep.add("transition '" + t + "' declared by both '" + it->second + "' and '" +
                        p.name + "'");
        }
    }
    for (const auto& [port, type] : alphabet.port_type)
        if (!names.count(type))
            rep.add("port '" + port + "' has unknown process type '" + type + "'");
    auto arep = alphabet.validate();
    for (auto& v : arep.items)
        rep.add(v.message);
    return rep;
}

ValidationReport validate_system(const LabeledGraph& g, const TypeTable& table) {
    ValidationReport rep;
    std::set<std::string> type_names;
    for (const auto& p : table.types)
        type_names.insert(p.name);
    std::vector<std::string> proc(g.vertex_count);
    for (Vertex v = 0; v < g.vertex_count; ++v) {
        std::vector<std::string> found;
        for (const auto& l : g.labels[v])
            if (type_names.count(l))
                found.push_back(l);
        if (found.size() != 1)
            rep.add("vertex " + std::to_string(v) + " carries " + std::to_string(found.size()) +
                    " process types, wants exactly 1");
        else
            proc[v] = found[0];
    }
    if (!rep.ok())
        return rep;
    for (const auto& e : g.edges) {
        auto pair = split_pair_label(e.label);
        if (!pair) {
            rep.add("edge label '" + e.label + "' is not a pair of observable transitions");
            continue;
        }
        const ProcessType& ps = table.type(proc[e.src]);
        const ProcessType& pd = table.type(proc[e.dst]);
        if (!ps.observable.count(pair->first))
            rep.add("edge transition '" + pair->first + "' is not observable in type '" + ps.name +
                    "'");
        if (!pd.observable.count(pair->second))
            rep.add("edge transition '" + pair->second + "' is not observable in type '" +
                    pd.name + "'");
    }
    return rep;
}

System System::from_graph(const LabeledGraph& g, const TypeTable& table) {
    ValidationReport rep = validate_system(g, table);
    if (!rep.ok())
        throw std::runtime_error("not a system:\n" + rep.to_string());
    System s;
    s.graph = g;
    s.proc.resize(g.vertex_count);
    s.port.resize(g.vertex_count);
    std::set<std::string> type_names;
    for (const auto& p : table.types)
        type_names.insert(p.name);
    for (Vertex v = 0; v < g.vertex_count; ++v) {
        for (const auto& l : g.labels[v]) {
            if (type_names.count(l))
                s.proc[v] = l;
            else if (table.alphabet.is_port(l))
                s.port[v] = l;
        }
    }
    return s;
}

Marking BehaviorNet::marking_of(const State& s) const {
    Marking m(place_info.size(), 0);
    for (size_t v = 0; v < s.size(); ++v)
        m[place_offset[v] + s[v]] = 1;
    return m;
}

bool BehaviorNet::enabled_in(const State& s, const BehaviorTransition& t) const {
    if (s[t.v1] != (uint8_t)(t.pre1 - place_offset[t.v1]))
        return false;
    if (t.v2 >= 0 && s[t.v2] != (uint8_t)(t.pre2 - place_offset[t.v2]))
        return false;
    return true;
}

State BehaviorNet::fire_in(const State& s, const BehaviorTransition& t) const {
    State out = s;
    out[t.v1] = (uint8_t)(t.post1 - place_offset[t.v1]);
    if (t.v2 >= 0)
        out[t.v2] = (uint8_t)(t.post2 - place_offset[t.v2]);
    return out;
}

BehaviorNet build_behavior(const System& s, const TypeTable& table) {
    BehaviorNet b;
    b.system = s;
    b.type_of_vertex.resize(s.graph.vertex_count);
    b.place_offset.resize(s.graph.vertex_count);
    for (Vertex v = 0; v < s.graph.vertex_count; ++v) {
        int ti = table.type_index(s.proc[v]);
        b.type_of_vertex[v] = ti;
        b.place_offset[v] = (int)b.place_info.size();
        const auto& net = table.types[ti].net;
        if (net.places.size() > 255)
            throw std::runtime_error("process type too large for the compact marking encoding");
        for (size_t q = 0; q < net.places.size(); ++q)
            b.place_info.push_back({v, (int)q});
    }

    b.initial.resize(s.graph.vertex_count);
    for (Vertex v = 0; v < s.graph.vertex_count; ++v)
        b.initial[v] = (uint8_t)table.types[b.type_of_vertex[v]].initial_place();

    // Internal transitions are preserved per vertex.
    for (Vertex v = 0; v < s.graph.vertex_count; ++v) {
        const ProcessType& p = table.types[b.type_of_vertex[v]];
        for (size_t t = 0; t < p.net.transitions.size(); ++t) {
            if (p.is_observable((int)t))
                continue;
            BehaviorTransition bt;
            bt.origin = BehaviorTransition::Origin::Internal;
            bt.v1 = v;
            bt.local_t1 = (int)t;
            bt.pre1 = b.place_id(v, p.pre_place((int)t));
            bt.post1 = b.place_id(v, p.post_place((int)t));
            b.transitions.push_back(bt);
        }
    }

    // Observable transitions are merged according to edge labels.
    for (const auto& e : s.graph.edges) {
        auto pair = split_pair_label(e.label);
        if (!pair)
            throw std::runtime_error("system edge label '" + e.label + "' is not a pair");
        const ProcessType& ps = table.types[b.type_of_vertex[e.src]];
        const ProcessType& pd = table.types[b.type_of_vertex[e.dst]];
        auto t1 = ps.observable_index(pair->first);
        auto t2 = pd.observable_index(pair->second);
        if (!t1 || !t2)
            throw std::runtime_error("edge label '" + e.label +
                                     "' cites a transition not observable in its endpoint type");
        BehaviorTransition bt;
        bt.origin = BehaviorTransition::Origin::Rendezvous;
        bt.v1 = e.src;
        bt.local_t1 = *t1;
        bt.v2 = e.dst;
        bt.local_t2 = *t2;
        bt.pre1 = b.place_id(e.src, ps.pre_place(*t1));
        bt.post1 = b.place_id(e.src, ps.post_place(*t1));
        bt.pre2 = b.place_id(e.dst, pd.pre_place(*t2));
        bt.post2 = b.place_id(e.dst, pd.post_place(*t2));
        bt.origin_edge = e;
        b.transitions.push_back(bt);
    }
    return b;
}

PetriNet BehaviorNet::to_petri(const TypeTable& table) const {
    PetriNet n;
    for (size_t p = 0; p < place_info.size(); ++p) {
        auto [v, q] = place_info[p];
        const auto& pt = table.types[type_of_vertex[v]];
        n.add_place(pt.net.places[q] + "@" + std::to_string(v),
                    initial[v] == q ? 1 : 0);
    }
    for (size_t t = 0; t < transitions.size(); ++t) {
        const auto& bt = transitions[t];
        int ti = n.add_transition(transition_name(table, (int)t));
        n.add_pre(bt.pre1, ti);
        n.add_post(ti, bt.post1);
        if (bt.v2 >= 0) {
            n.add_pre(bt.pre2, ti);
            n.add_post(ti, bt.post2);
        }
    }
    return n;
}

std::string BehaviorNet::transition_name(const TypeTable& table, int t) const {
    const auto& bt = transitions[t];
    const auto& p1 = table.types[type_of_vertex[bt.v1]];
    if (bt.origin == BehaviorTransition::Origin::Internal)
        return p1.net.transitions[bt.local_t1] + "@" + std::to_string(bt.v1);
    const auto& p2 = table.types[type_of_vertex[bt.v2]];
    return "(" + p1.net.transitions[bt.local_t1] + "@" + std::to_string(bt.v1) + "," +
           p2.net.transitions[bt.local_t2] + "@" + std::to_string(bt.v2) + ")";
}

std::vector<int> lift_labeling(const BehaviorNet& b, const TypeTable& table,
                               const PlaceLabeling& labeling,
                               const std::vector<std::string>& var_order) {
    std::map<std::string, int> var_index;
    for (size_t i = 0; i < var_order.size(); ++i)
        var_index[var_order[i]] = (int)i;
    std::vector<int> lifted(b.place_info.size(), -1);
    for (size_t p = 0; p < b.place_info.size(); ++p) {
        auto [v, q] = b.place_info[p];
        const auto& pt = table.types[b.type_of_vertex[v]];
        auto it = labeling.find(pt.net.places[q]);
        if (it == labeling.end())
            continue;
        auto vi = var_index.find(it->second);
        if (vi != var_index.end())
            lifted[p] = vi->second;
    }
    return lifted;
}

std::string behavior_to_dot(const BehaviorNet& b, const TypeTable& table,
                            const std::string& name) {
    PetriNet n = b.to_petri(table);
    std::set<std::string> obs;
    for (size_t t = 0; t < b.transitions.size(); ++t)
        if (b.transitions[t].origin == BehaviorTransition::Origin::Rendezvous)
            obs.insert(n.transitions[t]);
    return petri_to_dot(n, name, obs);
}

} // namespace vrhr
