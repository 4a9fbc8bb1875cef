#include "vrhr/petri.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace vrhr {

int PetriNet::add_place(const std::string& name, uint32_t initial_tokens) {
    places.push_back(name);
    initial.push_back(initial_tokens);
    return (int)places.size() - 1;
}

int PetriNet::add_transition(const std::string& name) {
    transitions.push_back(name);
    pre.emplace_back();
    post.emplace_back();
    return (int)transitions.size() - 1;
}

void PetriNet::add_pre(int place, int transition, uint32_t weight) {
    pre[transition].push_back({place, weight});
}

void PetriNet::add_post(int transition, int place, uint32_t weight) {
    post[transition].push_back({place, weight});
}

std::optional<int> PetriNet::place_index(const std::string& name) const {
    auto it = std::find(places.begin(), places.end(), name);
    if (it == places.end())
        return std::nullopt;
    return (int)(it - places.begin());
}

std::optional<int> PetriNet::transition_index(const std::string& name) const {
    auto it = std::find(transitions.begin(), transitions.end(), name);
    if (it == transitions.end())
        return std::nullopt;
    return (int)(it - transitions.begin());
}

bool enabled(const PetriNet& n, const Marking& m, int transition) {
    if (transition < 0 || transition >= (int)n.transitions.size())
        throw std::runtime_error("unknown transition index " + std::to_string(transition));
    for (const auto& [q, w] : n.pre[transition])
        if (m[q] < w)
            return false;
    return true;
}

Marking fire(const PetriNet& n, const Marking& m, int transition) {
    if (!enabled(n, m, transition))
        throw std::runtime_error("transition '" + n.transitions[transition] +
                                 "' is not enabled");
    Marking out = m;
    for (const auto& [q, w] : n.pre[transition])
        out[q] -= w;
    for (const auto& [q, w] : n.post[transition])
        out[q] += w;
    return out;
}

ReplayResult replay(const PetriNet& n, const std::vector<int>& seq) {
    return replay_from(n, n.initial, seq);
}

ReplayResult replay_from(const PetriNet& n, Marking start, const std::vector<int>& seq) {
    ReplayResult r;
    r.final = std::move(start);
    for (size_t i = 0; i < seq.size(); ++i) {
        if (!enabled(n, r.final, seq[i])) {
            r.failed_at = (int)i;
            r.failed_transition = n.transitions[seq[i]];
            return r;
        }
        r.final = fire(n, r.final, seq[i]);
    }
    return r;
}

int ProcessType::pre_place(int t) const { return net.pre[t].at(0).first; }
int ProcessType::post_place(int t) const { return net.post[t].at(0).first; }

int ProcessType::initial_place() const {
    for (size_t q = 0; q < net.initial.size(); ++q)
        if (net.initial[q] > 0)
            return (int)q;
    throw std::runtime_error("process type '" + name + "' has no initial place");
}

std::optional<int> ProcessType::observable_index(const std::string& t) const {
    if (!observable.count(t))
        return std::nullopt;
    return net.transition_index(t);
}

ProcessType make_process_type(const std::string& name, const std::vector<std::string>& places,
                              const std::string& initial,
                              const std::vector<TransitionSpec>& transitions) {
    ProcessType p;
    p.name = name;
    for (const auto& q : places)
        p.net.add_place(q, q == initial ? 1 : 0);
    for (const auto& t : transitions) {
        int ti = p.net.add_transition(t.name);
        auto from = p.net.place_index(t.from);
        auto to = p.net.place_index(t.to);
        if (!from || !to)
            throw std::runtime_error("transition '" + t.name + "' of '" + name +
                                     "' references an unknown place");
        p.net.add_pre(*from, ti);
        p.net.add_post(ti, *to);
        if (t.observable)
            p.observable.insert(t.name);
    }
    return p;
}

ValidationReport validate_process_type(const ProcessType& p) {
    ValidationReport rep;
    int marked = 0;
    for (size_t q = 0; q < p.net.initial.size(); ++q) {
        if (p.net.initial[q] > 1)
            rep.add("place '" + p.net.places[q] + "' initially holds " +
                    std::to_string(p.net.initial[q]) + " tokens");
        if (p.net.initial[q] > 0)
            marked++;
    }
    if (marked != 1)
        rep.add("process type '" + p.name + "' must have exactly one marked place, has " +
                std::to_string(marked));
    for (size_t t = 0; t < p.net.transitions.size(); ++t) {
        for (const auto& [q, w] : p.net.pre[t])
            if (w > 1)
                rep.add("weight above 1 on (" + p.net.places[q] + ", " + p.net.transitions[t] + ")");
        for (const auto& [q, w] : p.net.post[t])
            if (w > 1)
                rep.add("weight above 1 on (" + p.net.transitions[t] + ", " + p.net.places[q] + ")");
        if (p.net.pre[t].size() != 1)
            rep.add("transition '" + p.net.transitions[t] + "' has " +
                    std::to_string(p.net.pre[t].size()) + " predecessor places, wants 1");
        if (p.net.post[t].size() != 1)
            rep.add("transition '" + p.net.transitions[t] + "' has " +
                    std::to_string(p.net.post[t].size()) + " successor places, wants 1");
    }
    for (const auto& t : p.observable)
        if (!p.net.transition_index(t))
            rep.add("observable set names unknown transition '" + t + "'");
    return rep;
}

std::string petri_to_dot(const PetriNet& n, const std::string& name,
                         const std::set<std::string>& observable) {
    std::ostringstream os;
    os << "digraph \"" << name << "\" {\n";
    for (size_t q = 0; q < n.places.size(); ++q) {
        os << "  p" << q << " [shape=circle, label=\"" << n.places[q];
        if (n.initial[q] > 0)
            os << " (" << n.initial[q] << ")";
        os << "\"];\n";
    }
    for (size_t t = 0; t < n.transitions.size(); ++t) {
        bool obs = observable.count(n.transitions[t]) > 0;
        os << "  t" << t << " [shape=box, style=filled, fillcolor="
           << (obs ? "black, fontcolor=white" : "yellow") << ", label=\"" << n.transitions[t]
           << "\"];\n";
    }
    for (size_t t = 0; t < n.transitions.size(); ++t) {
        for (const auto& [q, w] : n.pre[t]) {
            os << "  p" << q << " -> t" << t;
            if (w != 1)
                os << " [label=\"" << w << "\"]";
            os << ";\n";
        }
        for (const auto& [q, w] : n.post[t]) {
            os << "  t" << t << " -> p" << q;
            if (w != 1)
                os << " [label=\"" << w << "\"]";
            os << ";\n";
        }
    }
    os << "}\n";
    return os.str();
}

} // namespace vrhr
