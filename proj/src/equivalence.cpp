#include "vrhr/equivalence.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace vrhr {

namespace en = enc_names;

AtomTrace stutter_collapse(const AtomTrace& t) {
    AtomTrace out;
    for (const auto& v : t)
        if (out.empty() || out.back() != v)
            out.push_back(v);
    return out;
}

bool EquivContext::is_eps_transition(int bt) const {
    const auto& t = beh_e.transitions[bt];
    if (t.origin != BehaviorTransition::Origin::Rendezvous)
        return false;
    const EdgeLabel& l = t.origin_edge.label;
    return expanded.epsilon.is_forward(l) || expanded.epsilon.is_backward(l);
}

namespace {

// Strips ports and renames half types back, so the expansion of the routed
// graph can be compared against the plain VR value.
LabeledGraph normalize_for_match(const LabeledGraph& g, const VertexLabelAlphabet& alphabet,
                                 const std::map<std::string, std::string>& type_rename) {
    LabeledGraph out = g;
    for (auto& ls : out.labels) {
        std::set<Label> next;
        for (const auto& l : ls) {
            if (alphabet.is_port(l))
                continue;
            auto it = type_rename.find(l);
            next.insert(it == type_rename.end() ? l : it->second);
        }
        ls = std::move(next);
    }
    return out;
}

} // namespace

ValidationReport check_expansion_correspondence(const TermPtr& theta, const TypeTable& base) {
    ValidationReport rep;
    ExpandedAlphabet exp = expand_type_table(base);
    LabeledGraph s = eval_vr(theta, base.alphabet);
    LabeledGraph sp = eval_hr(expand_term(theta, base), exp.table.alphabet);

    ValidationReport eps_rep = validate_epsilon_graph(sp, exp.epsilon);
    for (auto& v : eps_rep.items)
        rep.add("epsilon subgraph: " + v.message);
    if (!eps_rep.ok())
        return rep;

    LabeledGraph expanded_sp = expand(sp, exp.epsilon);
    LabeledGraph lhs = normalize_for_match(expanded_sp, exp.table.alphabet, exp.half_base);
    LabeledGraph rhs = normalize_for_match(s, base.alphabet, {});
    if (!isomorphic(lhs, rhs))
        rep.add("expansion of the routed value is not isomorphic to the VR value");

    // Sort correspondence: {(pi,t) | pi in sort(theta), t in Obs(ptype(pi))}.
    PortSet want;
    for (const auto& pi : infer_sort(theta, base.alphabet)) {
        const ProcessType& p = base.type(base.alphabet.port_type.at(pi));
        for (size_t t = 0; t < p.net.transitions.size(); ++t)
            if (p.is_observable((int)t))
                want.insert(en::rep_port(pi, p.net.transitions[t]));
    }
    PortSet got = sp.sort_of(exp.table.alphabet);
    if (got != want)
        rep.add("sort of the routed value differs from the expected representatives");

    System sys_e = System::from_graph(sp, exp.table);
    ValidationReport tri = check_edge_trichotomy(sys_e, exp);
    for (auto& v : tri.items)
        rep.add("trichotomy: " + v.message);
    return rep;
}

EquivContext make_equiv_context(const TermPtr& theta, const TypeTable& base,
                                const PlaceLabeling& labeling, const FormulaPtr& formula) {
    EquivContext ctx;
    ctx.base = base;
    ctx.expanded = expand_type_table(base);
    ctx.theta = theta;

    LabeledGraph s_g = eval_vr(theta, base.alphabet);
    LabeledGraph sp_g = eval_hr(expand_term(theta, base), ctx.expanded.table.alphabet);

    ValidationReport eps_rep = validate_epsilon_graph(sp_g, ctx.expanded.epsilon);
    if (!eps_rep.ok())
        throw std::runtime_error("routed value is not a valid epsilon graph:\n" +
                                 eps_rep.to_string());

    // Surviving vertices keep their relative order under expansion.
    std::vector<Vertex> survivors;
    {
        std::vector<char> removed(sp_g.vertex_count, 0);
        for (const auto& e : sp_g.edges)
            if (ctx.expanded.epsilon.is_forward(e.label))
                removed[e.dst] = 1;
        for (Vertex v = 0; v < sp_g.vertex_count; ++v)
            if (!removed[v])
                survivors.push_back(v);
    }

    LabeledGraph expanded_sp = expand(sp_g, ctx.expanded.epsilon);
    LabeledGraph lhs = normalize_for_match(expanded_sp, ctx.expanded.table.alphabet,
                                           ctx.expanded.half_base);
    LabeledGraph rhs = normalize_for_match(s_g, base.alphabet, {});
    auto iso = isomorphism(lhs, rhs);
    if (!iso)
        throw std::runtime_error("expansion of the routed value does not match the VR value");

    ctx.sys = System::from_graph(s_g, base);
    ctx.sys_e = System::from_graph(sp_g, ctx.expanded.table);
    ctx.beh = build_behavior(ctx.sys, base);
    ctx.beh_e = build_behavior(ctx.sys_e, ctx.expanded.table);

    ctx.var_order = variable_order(labeling, formula);
    ctx.lifted = lift_labeling(ctx.beh, base, labeling, ctx.var_order);
    PlaceLabeling lab_e = lift_variable_labeling(labeling, base);
    ctx.lifted_e = lift_labeling(ctx.beh_e, ctx.expanded.table, lab_e, ctx.var_order);

    ctx.leaf_of.assign(s_g.vertex_count, -1);
    ctx.orig_of.assign(sp_g.vertex_count, -1);
    for (size_t i = 0; i < survivors.size(); ++i) {
        Vertex sv = (*iso)[i]; // expanded id i maps to S vertex sv
        ctx.leaf_of[sv] = survivors[i];
        ctx.orig_of[survivors[i]] = sv;
    }

    // Observable transitions in a fixed order.
    std::map<std::string, int> obs_index;
    for (const auto& p : base.types)
        for (size_t t = 0; t < p.net.transitions.size(); ++t)
            if (p.is_observable((int)t)) {
                obs_index[p.net.transitions[t]] = (int)ctx.obs_names.size();
                ctx.obs_names.push_back(p.net.transitions[t]);
            }

    int n_e = sp_g.vertex_count;
    ctx.router_t.assign(n_e, -1);
    ctx.router_parent.assign(n_e, -1);
    ctx.leaf_router.resize(n_e);
    ctx.eps_preds.resize(n_e);
    ctx.idle_idx.assign(n_e, -1);
    ctx.active_idx.assign(n_e, -1);
    ctx.wait_idx.assign(n_e, -1);
    ctx.reply_idx.assign(n_e, -1);
    ctx.pend_idx.resize(n_e);

    for (Vertex v = 0; v < n_e; ++v) {
        const std::string& tn = ctx.sys_e.proc[v];
        auto rit = ctx.expanded.router_transition.find(tn);
        if (rit != ctx.expanded.router_transition.end()) {
            const std::string& t = rit->second;
            ctx.router_t[v] = obs_index.at(t);
            const ProcessType& r = ctx.expanded.table.type(tn);
            ctx.idle_idx[v] = *r.net.place_index(en::idle_place(t));
            ctx.active_idx[v] = *r.net.place_index(en::active_place(t));
            ctx.wait_idx[v] = *r.net.place_index(en::wait_place(t));
            ctx.reply_idx[v] = *r.net.place_index(en::reply_place(t));
        } else {
            const std::string& bp = ctx.expanded.half_base.at(tn);
            const ProcessType& half = ctx.expanded.table.type(tn);
            const ProcessType& p = base.type(bp);
            for (size_t t = 0; t < p.net.transitions.size(); ++t)
                if (p.is_observable((int)t)) {
                    const std::string& name = p.net.transitions[t];
                    ctx.pend_idx[v][obs_index.at(name)] =
                        *half.net.place_index(en::pend_place(name));
                }
        }
    }

    for (const auto& e : sp_g.edges) {
        if (!ctx.expanded.epsilon.is_forward(e.label))
            continue;
        auto pair = split_pair_label(e.label);
        int t = ctx.router_t[e.dst];
        if (t < 0)
            throw std::runtime_error("epsilon edge into a non-router vertex");
        ctx.eps_preds[e.dst].push_back({e.src, t});
        if (ctx.router_t[e.src] >= 0)
            ctx.router_parent[e.src] = e.dst;
        else
            ctx.leaf_router[e.src][t] = e.dst;
        (void)pair;
    }

    // Observable transitions leaving/entering each base place, per S vertex.
    ctx.post_obs.resize(s_g.vertex_count);
    ctx.pre_obs.resize(s_g.vertex_count);
    for (Vertex v = 0; v < s_g.vertex_count; ++v) {
        const ProcessType& p = base.type(ctx.sys.proc[v]);
        for (size_t t = 0; t < p.net.transitions.size(); ++t) {
            if (!p.is_observable((int)t))
                continue;
            int oi = obs_index.at(p.net.transitions[t]);
            ctx.post_obs[v][p.pre_place((int)t)].push_back(oi);
            ctx.pre_obs[v][p.post_place((int)t)].push_back(oi);
        }
    }
    return ctx;
}

ValidationReport check_routing_invariant(const EquivContext& ctx, const State& m_e) {
    ValidationReport rep;
    for (Vertex v = 0; v < (Vertex)m_e.size(); ++v) {
        int t = ctx.router_t[v];
        if (t < 0)
            continue;
        bool non_idle = m_e[v] != (uint8_t)ctx.idle_idx[v];
        int waiting = 0;
        for (const auto& [p, pt] : ctx.eps_preds[v]) {
            if (pt != t)
                continue;
            if (ctx.router_t[p] >= 0) {
                if (m_e[p] == (uint8_t)ctx.wait_idx[p])
                    waiting++;
            } else {
                auto it = ctx.pend_idx[p].find(t);
                if (it != ctx.pend_idx[p].end() && m_e[p] == (uint8_t)it->second)
                    waiting++;
            }
        }
        if (non_idle && waiting != 1)
            rep.add("router " + std::to_string(v) + " (" + ctx.obs_names[t] + ") is non-idle with " +
                    std::to_string(waiting) + " waiting predecessors");
        if (!non_idle && waiting != 0)
            rep.add("router " + std::to_string(v) + " (" + ctx.obs_names[t] + ") is idle with " +
                    std::to_string(waiting) + " waiting predecessors");
    }
    return rep;
}

namespace {

struct CostTable {
    // Per S' vertex: cost of its active place (routers).
    std::vector<int64_t> active;
    // Per S' leaf vertex and base local place: cost.
    std::vector<std::map<int, int64_t>> source;
    // Per router: cost of its reply place.
    std::vector<int64_t> reply;
};

CostTable build_costs(const EquivContext& ctx) {
    int n = (int)ctx.orig_of.size();
    CostTable c;
    c.active.assign(n, -1);
    c.reply.assign(n, -1);
    c.source.resize(n);

    std::function<int64_t(Vertex)> active_cost = [&](Vertex v) -> int64_t {
        if (c.active[v] >= 0)
            return c.active[v];
        int64_t val = 0;
        if (ctx.router_parent[v] >= 0)
            val = 1 + active_cost(ctx.router_parent[v]);
        c.active[v] = val;
        return val;
    };

    auto source_cost = [&](Vertex leaf, int place) -> int64_t {
        auto it = c.source[leaf].find(place);
        if (it != c.source[leaf].end())
            return it->second;
        Vertex orig = ctx.orig_of[leaf];
        int64_t best = 0;
        auto po = ctx.post_obs[orig].find(place);
        if (po != ctx.post_obs[orig].end())
            for (int t : po->second) {
                auto r = ctx.leaf_router[leaf].find(t);
                if (r != ctx.leaf_router[leaf].end())
                    best = std::max(best, active_cost(r->second));
            }
        int64_t val = 1 + best;
        c.source[leaf][place] = val;
        return val;
    };

    std::function<int64_t(Vertex)> reply_cost = [&](Vertex v) -> int64_t {
        if (c.reply[v] >= 0)
            return c.reply[v];
        c.reply[v] = -2; // cycle guard
        int t = ctx.router_t[v];
        int64_t leaf_max = 0, router_max = 0;
        for (const auto& [p, pt] : ctx.eps_preds[v]) {
            if (pt != t)
                continue;
            if (ctx.router_t[p] >= 0) {
                int64_t rc = reply_cost(p);
                if (rc < 0)
                    throw std::runtime_error("fuel: epsilon structure is not well-founded");
                router_max = std::max(router_max, rc);
            } else {
                // The commit will drop the leaf's token on post(t).
                Vertex orig = ctx.orig_of[p];
                const ProcessType& bp = ctx.base.type(ctx.sys.proc[orig]);
                auto ti = bp.observable_index(ctx.obs_names[t]);
                if (ti)
                    leaf_max = std::max(leaf_max, source_cost(p, bp.post_place(*ti)));
            }
        }
        c.reply[v] = 1 + leaf_max + router_max;
        return c.reply[v];
    };

    for (Vertex v = 0; v < n; ++v) {
        if (ctx.router_t[v] >= 0) {
            active_cost(v);
            reply_cost(v);
        } else {
            Vertex orig = ctx.orig_of[v];
            const ProcessType& bp = ctx.base.type(ctx.sys.proc[orig]);
            for (size_t q = 0; q < bp.net.places.size(); ++q)
                source_cost(v, (int)q);
        }
    }
    return c;
}

} // namespace

namespace {

uint64_t fuel_with(const CostTable& c, const EquivContext& ctx, const State& m_e) {
    uint64_t total = 0;
    for (Vertex v = 0; v < (Vertex)m_e.size(); ++v) {
        if (ctx.router_t[v] >= 0) {
            if (m_e[v] == (uint8_t)ctx.active_idx[v])
                total += (uint64_t)c.active[v];
            else if (m_e[v] == (uint8_t)ctx.reply_idx[v])
                total += (uint64_t)c.reply[v];
        } else {
            // Base places keep their indices in the halved type; pend places
            // fall outside the table and cost 0.
            auto it = c.source[v].find((int)m_e[v]);
            if (it != c.source[v].end())
                total += (uint64_t)it->second;
        }
    }
    return total;
}

} // namespace

uint64_t fuel(const EquivContext& ctx, const State& m_e) {
    // The cost table depends only on the graph structure, not the marking.
    return fuel_with(build_costs(ctx), ctx, m_e);
}

RelatedResult markings_related(const EquivContext& ctx, const State& m, const State& m_e) {
    RelatedResult res;
    res.condition.assign(m.size(), 0);
    res.related = true;
    res.canonical = true;

    for (Vertex v = 0; v < (Vertex)m.size(); ++v) {
        int q = m[v];
        Vertex leaf = ctx.leaf_of[v];

        if (m_e[leaf] == (uint8_t)q) { // base places share indices with the halved type
            res.condition[v] = 1;
            continue;
        }
        res.canonical = false;

        // Walk the wait path from the leaf's router for each candidate t.
        auto wait_path_hits = [&](int t, bool want_reply) -> bool {
            auto pend = ctx.pend_idx[leaf].find(t);
            if (pend == ctx.pend_idx[leaf].end() || m_e[leaf] != (uint8_t)pend->second)
                return false;
            auto rit = ctx.leaf_router[leaf].find(t);
            if (rit == ctx.leaf_router[leaf].end())
                return false;
            Vertex r = rit->second;
            while (r >= 0) {
                uint8_t target = (uint8_t)(want_reply ? ctx.reply_idx[r] : ctx.active_idx[r]);
                if (m_e[r] == target)
                    return true;
                if (m_e[r] != (uint8_t)ctx.wait_idx[r])
                    return false;
                r = ctx.router_parent[r];
            }
            return false;
        };

        bool matched = false;
        auto po = ctx.post_obs[v].find(q);
        if (po != ctx.post_obs[v].end())
            for (int t : po->second)
                if (wait_path_hits(t, false)) {
                    res.condition[v] = 2;
                    matched = true;
                    break;
                }
        if (!matched) {
            auto pr = ctx.pre_obs[v].find(q);
            if (pr != ctx.pre_obs[v].end())
                for (int t : pr->second)
                    if (wait_path_hits(t, true)) {
                        res.condition[v] = 3;
                        matched = true;
                        break;
                    }
        }
        if (!matched) {
            res.condition[v] = 0;
            res.related = false;
        }
    }
    return res;
}

bool EquivSuiteReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed)
            return false;
    return true;
}

bool EquivSuiteReport::any_truncated() const {
    for (const auto& c : checks)
        if (c.truncated)
            return true;
    return false;
}

namespace {

using ValVec = std::vector<uint64_t>;

struct TraceSetResult {
    std::set<std::vector<ValVec>> traces;
    bool truncated = false;
};

TraceSetResult collapsed_prefixes(const BehaviorNet& b, const std::vector<int>& lifted,
                                  size_t var_count, const ExploreResult& reach, int max_len,
                                  size_t max_pairs) {
    TraceSetResult out;
    std::vector<ValVec> vals(reach.states.size());
    for (size_t i = 0; i < reach.states.size(); ++i)
        vals[i] = state_counts(b, lifted, var_count, reach.states[i]);

    std::map<std::vector<ValVec>, int> intern;
    std::vector<std::vector<ValVec>> traces;
    auto intern_trace = [&](const std::vector<ValVec>& t) {
        auto [it, fresh] = intern.try_emplace(t, (int)traces.size());
        if (fresh)
            traces.push_back(t);
        return it->second;
    };

    std::set<std::pair<int, int>> visited;
    std::deque<std::pair<int, int>> work;
    int t0 = intern_trace({vals[0]});
    visited.insert({0, t0});
    work.push_back({0, t0});
    size_t pairs = 1;

    while (!work.empty()) {
        auto [sid, tid] = work.front();
        work.pop_front();
        const State& s = reach.states[sid];
        for (size_t t = 0; t < b.transitions.size(); ++t) {
            if (!b.enabled_in(s, b.transitions[t]))
                continue;
            State next = b.fire_in(s, b.transitions[t]);
            auto it = reach.index.find(next);
            if (it == reach.index.end())
                continue; // beyond the explored cap; caller reports truncation
            int nid = it->second;
            std::vector<ValVec> tr = traces[tid];
            if (vals[nid] != tr.back()) {
                if ((int)tr.size() >= max_len)
                    continue;
                tr.push_back(vals[nid]);
            }
            int ntid = intern_trace(tr);
            if (visited.insert({nid, ntid}).second) {
                if (++pairs > max_pairs) {
                    out.truncated = true;
                    for (const auto& [key, id] : intern)
                        out.traces.insert(key);
                    return out;
                }
                work.push_back({nid, ntid});
            }
        }
    }
    for (const auto& [key, id] : intern)
        out.traces.insert(key);
    return out;
}

// Counterexample markings surface as vertex -> place JSON maps.
std::string marking_json(const EquivContext& ctx, const State& m_e) {
    std::ostringstream os;
    os << "{";
    for (Vertex v = 0; v < (Vertex)m_e.size(); ++v) {
        if (v)
            os << ", ";
        const ProcessType& p = ctx.expanded.table.type(ctx.sys_e.proc[v]);
        os << "\"" << v << "\": \"" << p.net.places[m_e[v]] << "\"";
    }
    os << "}";
    return os.str();
}

std::string show_valvec(const ValVec& v, const std::vector<std::string>& vars) {
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i)
            os << ", ";
        os << vars[i] << ":" << v[i];
    }
    os << "}";
    return os.str();
}

std::string show_trace(const std::vector<ValVec>& t, const std::vector<std::string>& vars) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < t.size(); ++i) {
        if (i)
            os << " ";
        os << show_valvec(t[i], vars);
    }
    os << "]";
    return os.str();
}

} // namespace

EquivCheck check_valuation_set_equality(const EquivContext& ctx, size_t max_states,
                                        const std::vector<int>* lifted_e_override) {
    EquivCheck check{"valuation-set equality", true, false, ""};
    ExploreResult ra = explore(ctx.beh, max_states);
    ExploreResult rb = explore(ctx.beh_e, max_states);
    if (!ra.exhaustive || !rb.exhaustive) {
        check.truncated = true;
        check.passed = false;
        check.detail = "exploration truncated; equality not asserted";
        return check;
    }
    const std::vector<int>& le = lifted_e_override ? *lifted_e_override : ctx.lifted_e;
    std::set<ValVec> va, vb;
    for (const auto& s : ra.states)
        va.insert(state_counts(ctx.beh, ctx.lifted, ctx.var_order.size(), s));
    for (const auto& s : rb.states)
        vb.insert(state_counts(ctx.beh_e, le, ctx.var_order.size(), s));
    if (va != vb) {
        check.passed = false;
        std::ostringstream os;
        for (const auto& v : va)
            if (!vb.count(v))
                os << "only original side reaches " << show_valvec(v, ctx.var_order) << "; ";
        for (const auto& v : vb)
            if (!va.count(v))
                os << "only routed side reaches " << show_valvec(v, ctx.var_order) << "; ";
        check.detail = os.str();
    }
    return check;
}

EquivCheck check_bounded_stutter_traces(const EquivContext& ctx, int max_len, size_t max_states,
                                        size_t max_pairs,
                                        const std::vector<int>* lifted_e_override) {
    EquivCheck check{"bounded stutter-trace equivalence", true, false, ""};
    ExploreResult ra = explore(ctx.beh, max_states);
    ExploreResult rb = explore(ctx.beh_e, max_states);
    if (!ra.exhaustive || !rb.exhaustive) {
        check.truncated = true;
        check.passed = false;
        check.detail = "exploration truncated; equivalence not asserted";
        return check;
    }
    const std::vector<int>& le = lifted_e_override ? *lifted_e_override : ctx.lifted_e;
    TraceSetResult ta =
        collapsed_prefixes(ctx.beh, ctx.lifted, ctx.var_order.size(), ra, max_len, max_pairs);
    TraceSetResult tb = collapsed_prefixes(ctx.beh_e, le, ctx.var_order.size(), rb, max_len,
                                           max_pairs);
    if (ta.truncated || tb.truncated) {
        check.truncated = true;
        check.passed = false;
        check.detail = "trace enumeration truncated; equivalence not asserted";
        return check;
    }
    if (ta.traces != tb.traces) {
        check.passed = false;
        std::ostringstream os;
        for (const auto& t : ta.traces)
            if (!tb.traces.count(t)) {
                os << "original-side trace " << show_trace(t, ctx.var_order)
                   << " has no routed counterpart; ";
                break;
            }
        for (const auto& t : tb.traces)
            if (!ta.traces.count(t)) {
                os << "routed-side trace " << show_trace(t, ctx.var_order)
                   << " has no original counterpart; ";
                break;
            }
        check.detail = os.str();
    }
    return check;
}

EquivSuiteReport run_equivalence_suite(const EquivContext& ctx, const EquivSuiteOptions& opts) {
    EquivSuiteReport report;

    {
        EquivCheck c{"expansion correspondence", true, false, ""};
        ValidationReport r = check_expansion_correspondence(ctx.theta, ctx.base);
        if (!r.ok()) {
            c.passed = false;
            c.detail = r.to_string();
        }
        report.checks.push_back(c);
    }

    {
        EquivCheck c{"initial markings related and canonical", true, false, ""};
        RelatedResult rr = markings_related(ctx, ctx.beh.initial, ctx.beh_e.initial);
        if (!rr.related || !rr.canonical) {
            c.passed = false;
            c.detail = "initial markings fail the relation";
        }
        report.checks.push_back(c);
    }

    ExploreResult rb = explore(ctx.beh_e, opts.max_states);

    {
        EquivCheck c{"routing invariant over reachable markings", true, false, ""};
        if (!rb.exhaustive) {
            c.truncated = true;
            c.detail = "routed exploration truncated";
        }
        for (const auto& s : rb.states) {
            ValidationReport r = check_routing_invariant(ctx, s);
            if (!r.ok()) {
                c.passed = false;
                c.detail = r.items.front().message + " at marking " + marking_json(ctx, s);
                break;
            }
        }
        report.checks.push_back(c);
    }

    {
        EquivCheck c{"fuel strictly decreases on epsilon firings", true, false, ""};
        if (!rb.exhaustive)
            c.truncated = true;
        CostTable costs = build_costs(ctx);
        std::vector<uint64_t> fuels(rb.states.size());
        for (size_t i = 0; i < rb.states.size(); ++i)
            fuels[i] = fuel_with(costs, ctx, rb.states[i]);
        for (size_t i = 0; i < rb.states.size() && c.passed; ++i) {
            for (size_t t = 0; t < ctx.beh_e.transitions.size(); ++t) {
                if (!ctx.is_eps_transition((int)t))
                    continue;
                if (!ctx.beh_e.enabled_in(rb.states[i], ctx.beh_e.transitions[t]))
                    continue;
                State next = ctx.beh_e.fire_in(rb.states[i], ctx.beh_e.transitions[t]);
                auto it = rb.index.find(next);
                if (it == rb.index.end())
                    continue;
                if (fuels[it->second] >= fuels[i]) {
                    c.passed = false;
                    c.detail = "firing " + ctx.beh_e.transition_name(ctx.expanded.table, (int)t) +
                               " does not decrease fuel (" + std::to_string(fuels[i]) + " -> " +
                               std::to_string(fuels[it->second]) + ") at marking " +
                               marking_json(ctx, rb.states[i]);
                    break;
                }
            }
        }
        report.checks.push_back(c);
    }

    {
        EquivCheck c{"epsilon firings preserve the marking relation", true, false, ""};
        ExploreResult ra = explore(ctx.beh, opts.max_states);
        if (!ra.exhaustive || !rb.exhaustive)
            c.truncated = true;
        size_t sample = std::min(opts.related_sample, ra.states.size());
        for (size_t i = 0; i < rb.states.size() && c.passed; ++i) {
            for (size_t t = 0; t < ctx.beh_e.transitions.size() && c.passed; ++t) {
                if (!ctx.is_eps_transition((int)t))
                    continue;
                if (!ctx.beh_e.enabled_in(rb.states[i], ctx.beh_e.transitions[t]))
                    continue;
                State next = ctx.beh_e.fire_in(rb.states[i], ctx.beh_e.transitions[t]);
                for (size_t k = 0; k < sample; ++k) {
                    bool before = markings_related(ctx, ra.states[k], rb.states[i]).related;
                    bool after = markings_related(ctx, ra.states[k], next).related;
                    if (before != after) {
                        c.passed = false;
                        c.detail = "relation changed across an epsilon firing";
                        break;
                    }
                }
            }
        }
        report.checks.push_back(c);
    }

    report.checks.push_back(check_valuation_set_equality(ctx, opts.max_states));
    report.checks.push_back(check_bounded_stutter_traces(ctx, opts.max_trace_len, opts.max_states,
                                                         opts.max_trace_pairs));
    return report;
}

} // namespace vrhr
