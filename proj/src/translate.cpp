#include "vrhr/translate.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace vrhr {

namespace enc_names {
std::string half_type(const std::string& p) { return "half_" + p; }
std::string router_type(const std::string& t) { return "eps_" + t; }
std::string pend_place(const std::string& t) { return "pend_" + t; }
std::string req_trans(const std::string& t) { return "req_" + t; }
std::string fin_trans(const std::string& t) { return "fin_" + t; }
std::string idle_place(const std::string& t) { return "idle_" + t; }
std::string active_place(const std::string& t) { return "active_" + t; }
std::string wait_place(const std::string& t) { return "wait_" + t; }
std::string reply_place(const std::string& t) { return "reply_" + t; }
std::string recv_trans(const std::string& t) { return "recv_" + t; }
std::string fwd_trans(const std::string& t) { return "fwd_" + t; }
std::string ack_trans(const std::string& t) { return "ack_" + t; }
std::string reset_trans(const std::string& t) { return "reset_" + t; }
std::string half_port(const std::string& pi) { return "half_" + pi; }
std::string rep_port(const std::string& pi, const std::string& t) { return "rep_" + pi + "_" + t; }
std::string bar_port(const std::string& pi, const std::string& t) { return "new_" + pi + "_" + t; }
EdgeLabel request_label(const std::string& t) { return make_pair_label(req_trans(t), recv_trans(t)); }
EdgeLabel forward_label(const std::string& t) { return make_pair_label(fwd_trans(t), recv_trans(t)); }
EdgeLabel commit_label(const std::string& t) { return make_pair_label(reset_trans(t), fin_trans(t)); }
EdgeLabel ack_label(const std::string& t) { return make_pair_label(reset_trans(t), ack_trans(t)); }
} // namespace enc_names

namespace en = enc_names;

ProcessType halve(const ProcessType& p) {
    ProcessType h;
    h.name = en::half_type(p.name);
    for (size_t q = 0; q < p.net.places.size(); ++q)
        h.net.add_place(p.net.places[q], p.net.initial[q]);

    std::vector<int> obs; // observable transition indices, declaration order
    for (size_t t = 0; t < p.net.transitions.size(); ++t)
        if (p.is_observable((int)t))
            obs.push_back((int)t);
    for (int t : obs)
        h.net.add_place(en::pend_place(p.net.transitions[t]), 0);

    for (size_t t = 0; t < p.net.transitions.size(); ++t) {
        const std::string& name = p.net.transitions[t];
        if (!p.is_observable((int)t)) {
            int ti = h.net.add_transition(name);
            h.net.add_pre(p.pre_place((int)t), ti);
            h.net.add_post(ti, p.post_place((int)t));
            continue;
        }
        int pend = *h.net.place_index(en::pend_place(name));
        int req = h.net.add_transition(en::req_trans(name));
        h.net.add_pre(p.pre_place((int)t), req);
        h.net.add_post(req, pend);
        h.observable.insert(en::req_trans(name));
        int fin = h.net.add_transition(en::fin_trans(name));
        h.net.add_pre(pend, fin);
        h.net.add_post(fin, p.post_place((int)t));
        h.observable.insert(en::fin_trans(name));
    }
    return h;
}

ProcessType make_router(const std::string& t) {
    return make_process_type(
        en::router_type(t),
        {en::idle_place(t), en::active_place(t), en::wait_place(t), en::reply_place(t)},
        en::idle_place(t),
        {
            {en::recv_trans(t), en::idle_place(t), en::active_place(t), true},
            {en::fwd_trans(t), en::active_place(t), en::wait_place(t), true},
            {t, en::active_place(t), en::reply_place(t), true},
            {en::ack_trans(t), en::wait_place(t), en::reply_place(t), true},
            {en::reset_trans(t), en::reply_place(t), en::idle_place(t), true},
        });
}

ExpandedAlphabet expand_type_table(const TypeTable& base) {
    ExpandedAlphabet out;
    std::vector<std::string> all_obs; // declaration order across types
    for (const auto& p : base.types) {
        ProcessType h = halve(p);
        out.half_base[h.name] = p.name;
        out.table.types.push_back(std::move(h));
        for (size_t t = 0; t < p.net.transitions.size(); ++t)
            if (p.is_observable((int)t))
                all_obs.push_back(p.net.transitions[t]);
    }
    for (const auto& t : all_obs) {
        ProcessType r = make_router(t);
        out.router_transition[r.name] = t;
        out.table.types.push_back(std::move(r));
        out.epsilon.forward_to_backward[en::request_label(t)] = en::commit_label(t);
        out.epsilon.forward_to_backward[en::forward_label(t)] = en::ack_label(t);
    }
    for (const auto& p : out.table.types)
        out.table.alphabet.process_types.insert(p.name);
    for (const auto& [pi, pname] : base.alphabet.port_type) {
        out.table.alphabet.port_type[en::half_port(pi)] = en::half_type(pname);
        const ProcessType& p = base.type(pname);
        for (size_t t = 0; t < p.net.transitions.size(); ++t) {
            if (!p.is_observable((int)t))
                continue;
            const std::string& tn = p.net.transitions[t];
            out.table.alphabet.port_type[en::rep_port(pi, tn)] = en::router_type(tn);
            out.table.alphabet.port_type[en::bar_port(pi, tn)] = en::router_type(tn);
        }
    }
    ValidationReport rep = out.table.validate();
    if (!rep.ok())
        throw std::runtime_error("generated routed type table is invalid (name collision?):\n" +
                                 rep.to_string());
    return out;
}

namespace {

std::vector<std::string> observables_of_port(const std::string& pi, const TypeTable& base) {
    auto it = base.alphabet.port_type.find(pi);
    if (it == base.alphabet.port_type.end())
        throw std::runtime_error("undeclared port '" + pi + "'");
    const ProcessType& p = base.type(it->second);
    std::vector<std::string> out;
    for (size_t t = 0; t < p.net.transitions.size(); ++t)
        if (p.is_observable((int)t))
            out.push_back(p.net.transitions[t]);
    return out;
}

TermPtr compose_opt(TermPtr a, TermPtr b) {
    if (!a)
        return b;
    if (!b)
        return a;
    return mk_compose(std::move(a), std::move(b));
}

// E^t(pi, pi'): request/ack pair between the old representative and the copy.
TermPtr router_bundle(const std::string& pi, const std::string& pi2, const std::string& t) {
    return mk_compose(mk_edge(en::forward_label(t), en::rep_port(pi, t), en::bar_port(pi2, t)),
                      mk_edge(en::ack_label(t), en::bar_port(pi2, t), en::rep_port(pi, t)));
}

// halfE^t(pi): attempt/commit pair between the half vertex and its router.
TermPtr half_bundle(const std::string& pi, const std::string& t) {
    return mk_compose(mk_edge(en::request_label(t), en::half_port(pi), en::rep_port(pi, t)),
                      mk_edge(en::commit_label(t), en::rep_port(pi, t), en::half_port(pi)));
}

} // namespace

TermPtr enc(const std::vector<std::pair<std::string, std::string>>& alpha,
            const TypeTable& base) {
    auto sorted = alpha;
    std::sort(sorted.begin(), sorted.end());
    TermPtr acc;
    for (const auto& [pi, pi2] : sorted)
        for (const auto& t : observables_of_port(pi, base))
            acc = compose_opt(acc, router_bundle(pi, pi2, t));
    return acc;
}

namespace {

struct ExpandCtx {
    const TypeTable& base;
    const std::vector<PortSet>& nt_sorts;
    const std::vector<std::string>& nt_names;
    size_t next_nt = 0;
};

struct Expanded {
    TermPtr term;
    PortSet sort;
};

// Keeps exactly the (pi,t) representatives of the given ports.
TermPtr relab_keep_reps(const PortSet& ports, const TypeTable& base, TermPtr child) {
    std::vector<std::pair<std::string, std::string>> map;
    for (const auto& pi : ports)
        for (const auto& t : observables_of_port(pi, base))
            map.push_back({en::rep_port(pi, t), en::rep_port(pi, t)});
    return mk_relab(std::move(map), std::move(child));
}

Expanded expand_rec(const TermPtr& u, ExpandCtx& ctx) {
    switch (u->kind) {
    case Term::Kind::Vertex: {
        const std::string& pi = u->port1;
        TermPtr acc = mk_vertex(en::half_port(pi));
        for (const auto& t : observables_of_port(pi, ctx.base))
            acc = mk_compose(acc, half_bundle(pi, t));
        return {relab_keep_reps({pi}, ctx.base, acc), {pi}};
    }
    case Term::Kind::AddEdge: {
        Expanded child = expand_rec(u->left, ctx);
        auto pair = split_pair_label(u->edge_label);
        if (!pair)
            throw std::runtime_error("translation requires rendezvous pair edge labels, got '" +
                                     u->edge_label + "'");
        // A port with no current representative makes the operation a no-op.
        if (!child.sort.count(u->port1) || !child.sort.count(u->port2))
            return child;
        TermPtr edge = mk_edge(u->edge_label, en::rep_port(u->port1, pair->first),
                               en::rep_port(u->port2, pair->second));
        return {mk_compose(std::move(edge), child.term), child.sort};
    }
    case Term::Kind::Relab: {
        Expanded child = expand_rec(u->left, ctx);
        std::vector<std::pair<std::string, std::string>> alpha;
        PortSet out_sort;
        for (const auto& [a, b] : u->relab_map)
            if (child.sort.count(a)) {
                alpha.push_back({a, b});
                out_sort.insert(b);
            }
        TermPtr bundle = enc(alpha, ctx.base);
        std::vector<std::pair<std::string, std::string>> fresh;
        for (const auto& pi : out_sort)
            for (const auto& t : observables_of_port(pi, ctx.base))
                fresh.push_back({en::bar_port(pi, t), en::rep_port(pi, t)});
        return {mk_relab(std::move(fresh), compose_opt(child.term, bundle)), out_sort};
    }
    case Term::Kind::Union: {
        Expanded l = expand_rec(u->left, ctx);
        Expanded r = expand_rec(u->right, ctx);
        PortSet shared;
        for (const auto& pi : l.sort)
            if (r.sort.count(pi))
                shared.insert(pi);
        std::vector<std::pair<std::string, std::string>> id_shared;
        for (const auto& pi : shared)
            id_shared.push_back({pi, pi});

        auto wrap = [&](Expanded side) -> TermPtr {
            // Refresh the shared representatives; the others stay in place.
            std::vector<std::pair<std::string, std::string>> fresh;
            for (const auto& pi : side.sort) {
                for (const auto& t : observables_of_port(pi, ctx.base)) {
                    if (shared.count(pi))
                        fresh.push_back({en::bar_port(pi, t), en::rep_port(pi, t)});
                    else
                        fresh.push_back({en::rep_port(pi, t), en::rep_port(pi, t)});
                }
            }
            return mk_relab(std::move(fresh),
                            compose_opt(side.term, enc(id_shared, ctx.base)));
        };
        PortSet out_sort = l.sort;
        out_sort.insert(r.sort.begin(), r.sort.end());
        return {mk_compose(wrap(std::move(l)), wrap(std::move(r))), out_sort};
    }
    case Term::Kind::Nonterminal: {
        if (ctx.next_nt >= ctx.nt_sorts.size())
            throw std::runtime_error("expand_term: term is not ground (nonterminal '" +
                                     u->nonterminal + "')");
        size_t i = ctx.next_nt++;
        return {mk_nonterminal(ctx.nt_names[i]), ctx.nt_sorts[i]};
    }
    case Term::Kind::Compose:
    case Term::Kind::Edge:
        throw std::runtime_error("expand_term applies to VR terms only");
    }
    throw std::logic_error("unreachable");
}

} // namespace

TermPtr expand_term(const TermPtr& theta, const TypeTable& base,
                    const std::vector<PortSet>& nt_sorts,
                    const std::vector<std::string>& nt_names) {
    if (nt_sorts.size() != nt_names.size())
        throw std::runtime_error("expand_term: nt_sorts and nt_names differ in length");
    ExpandCtx ctx{base, nt_sorts, nt_names, 0};
    return expand_rec(theta, ctx).term;
}

PlaceLabeling lift_variable_labeling(const PlaceLabeling& l, const TypeTable& base) {
    PlaceLabeling out = l;
    for (const auto& p : base.types) {
        for (size_t t = 0; t < p.net.transitions.size(); ++t) {
            if (!p.is_observable((int)t))
                continue;
            const std::string& tn = p.net.transitions[t];
            auto pre = l.find(p.net.places[p.pre_place((int)t)]);
            if (pre != l.end())
                out[en::active_place(tn)] = pre->second;
            auto post = l.find(p.net.places[p.post_place((int)t)]);
            if (post != l.end())
                out[en::reply_place(tn)] = post->second;
        }
    }
    return out;
}

ValidationReport check_edge_trichotomy(const System& s, const ExpandedAlphabet& exp) {
    ValidationReport rep;
    std::map<std::pair<Vertex, Vertex>, std::set<EdgeLabel>> dir;
    for (const auto& e : s.graph.edges)
        dir[{e.src, e.dst}].insert(e.label);

    std::set<std::pair<Vertex, Vertex>> pairs;
    for (const auto& [vw, _] : dir)
        pairs.insert({std::min(vw.first, vw.second), std::max(vw.first, vw.second)});

    auto empty = std::set<EdgeLabel>{};
    auto edges_of = [&](Vertex a, Vertex b) -> const std::set<EdgeLabel>& {
        auto it = dir.find({a, b});
        return it == dir.end() ? empty : it->second;
    };

    for (const auto& [a, b] : pairs) {
        const std::string& ta = s.proc[a];
        const std::string& tb = s.proc[b];
        int matched = 0;
        std::string last;

        auto try_attempt = [&](Vertex h, Vertex r) {
            auto hi = exp.half_base.find(s.proc[h]);
            auto ri = exp.router_transition.find(s.proc[r]);
            if (hi == exp.half_base.end() || ri == exp.router_transition.end())
                return;
            const std::string& t = ri->second;
            if (edges_of(h, r) == std::set<EdgeLabel>{en::request_label(t)} &&
                edges_of(r, h) == std::set<EdgeLabel>{en::commit_label(t)}) {
                matched++;
                last = "attempt bundle (" + t + ")";
            }
        };
        try_attempt(a, b);
        try_attempt(b, a);

        auto try_forward = [&](Vertex c, Vertex p) {
            auto ci = exp.router_transition.find(s.proc[c]);
            auto pi = exp.router_transition.find(s.proc[p]);
            if (ci == exp.router_transition.end() || pi == exp.router_transition.end() ||
                ci->second != pi->second)
                return;
            const std::string& t = ci->second;
            if (edges_of(c, p) == std::set<EdgeLabel>{en::forward_label(t)} &&
                edges_of(p, c) == std::set<EdgeLabel>{en::ack_label(t)}) {
                matched++;
                last = "forward bundle (" + t + ")";
            }
        };
        try_forward(a, b);
        try_forward(b, a);

        {
            auto ra = exp.router_transition.find(ta);
            auto rb = exp.router_transition.find(tb);
            if (ra != exp.router_transition.end() && rb != exp.router_transition.end()) {
                auto ok_dir = [&](Vertex x, Vertex y, const std::string& tx,
                                  const std::string& ty) {
                    const auto& e = edges_of(x, y);
                    return e.empty() || e == std::set<EdgeLabel>{make_pair_label(tx, ty)};
                };
                if (ok_dir(a, b, ra->second, rb->second) && ok_dir(b, a, rb->second, ra->second) &&
                    !(edges_of(a, b).empty() && edges_of(b, a).empty())) {
                    matched++;
                    last = "rendezvous edge";
                }
            }
        }

        if (matched != 1)
            rep.add("edge set between vertices " + std::to_string(a) + " (" + ta + ") and " +
                    std::to_string(b) + " (" + tb + ") matches " + std::to_string(matched) +
                    " of the three shapes");
    }
    return rep;
}

std::string sort_key(const PortSet& s) {
    std::string k;
    for (const auto& p : s)
        k += p + ",";
    return k;
}

namespace {

std::string annotated_name(const std::string& nt, const PortSet& s) {
    std::string n = nt + "_s";
    for (const auto& p : s)
        n += "_" + p;
    return n;
}

std::vector<std::string> nt_occurrences(const TermPtr& t) {
    std::vector<std::string> out;
    std::function<void(const TermPtr&)> go = [&](const TermPtr& u) {
        if (!u)
            return;
        if (u->kind == Term::Kind::Nonterminal) {
            out.push_back(u->nonterminal);
            return;
        }
        go(u->left);
        go(u->right);
    };
    go(t);
    return out;
}

} // namespace

TranslatedGrammar translate_grammar(const Grammar& g, const TypeTable& base) {
    if (g.algebra != Algebra::VR)
        throw std::runtime_error("translate_grammar expects a VR grammar");
    ValidationReport grep = g.validate(base.alphabet);
    if (!grep.ok())
        throw std::runtime_error("grammar is invalid:\n" + grep.to_string());

    TranslatedGrammar out;
    out.grammar.algebra = Algebra::HR;

    // Least fixpoint of the derivable sorts of every nonterminal.
    std::map<std::string, std::vector<PortSet>> sorts;
    auto add_sort = [&](const std::string& nt, const PortSet& s) {
        auto& v = sorts[nt];
        if (std::find(v.begin(), v.end(), s) == v.end()) {
            v.push_back(s);
            return true;
        }
        return false;
    };

    const size_t assignment_cap = 1u << 20;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& rule : g.rules) {
            auto occs = nt_occurrences(rule.rhs);
            // Iterate the cartesian product of the current sort sets.
            std::vector<size_t> idx(occs.size(), 0);
            bool viable = true;
            size_t product = 1;
            for (const auto& o : occs) {
                size_t n = sorts.count(o) ? sorts[o].size() : 0;
                if (n == 0) {
                    viable = false;
                    break;
                }
                product *= n;
                if (product > assignment_cap)
                    throw std::runtime_error("sort-annotation blowup translating the grammar");
            }
            if (!viable)
                continue;
            while (true) {
                std::vector<PortSet> assign;
                for (size_t i = 0; i < occs.size(); ++i)
                    assign.push_back(sorts[occs[i]][idx[i]]);
                PortSet s = infer_sort(rule.rhs, base.alphabet, assign);
                changed |= add_sort(rule.lhs, s);
                size_t i = 0;
                for (; i < idx.size(); ++i) {
                    if (++idx[i] < sorts[occs[i]].size())
                        break;
                    idx[i] = 0;
                }
                if (i == idx.size())
                    break;
                if (occs.empty())
                    break;
            }
        }
    }
    out.nt_sorts = sorts;

    for (const auto& nt : g.nonterminals)
        for (const auto& s : sorts[nt]) {
            std::string name = annotated_name(nt, s);
            out.names[{nt, sort_key(s)}] = name;
            out.grammar.nonterminals.push_back(name);
        }

    std::set<std::string> seen_rules;
    for (size_t ri = 0; ri < g.rules.size(); ++ri) {
        const Rule& rule = g.rules[ri];
        auto occs = nt_occurrences(rule.rhs);
        std::vector<size_t> idx(occs.size(), 0);
        bool viable = true;
        for (const auto& o : occs)
            if (sorts[o].empty())
                viable = false;
        if (!viable)
            continue;
        while (true) {
            std::vector<PortSet> assign;
            std::vector<std::string> names;
            std::string akey;
            for (size_t i = 0; i < occs.size(); ++i) {
                const PortSet& s = sorts[occs[i]][idx[i]];
                assign.push_back(s);
                names.push_back(out.names.at({occs[i], sort_key(s)}));
                akey += sort_key(s) + "|";
            }
            PortSet s = infer_sort(rule.rhs, base.alphabet, assign);
            TermPtr rhs = expand_term(rule.rhs, base, assign, names);
            std::string lhs = out.names.at({rule.lhs, sort_key(s)});
            std::string rkey = lhs + " -> " + print_term(rhs);
            if (seen_rules.insert(rkey).second) {
                out.grammar.rules.push_back({lhs, rhs});
            }
            // Record the instance even when the rule text collapsed with an
            // earlier instance, so derivation mapping stays total.
            for (size_t k = 0; k < out.grammar.rules.size(); ++k)
                if (out.grammar.rules[k].lhs == lhs &&
                    term_equal(out.grammar.rules[k].rhs, rhs)) {
                    out.rule_index[{(int)ri, akey}] = (int)k;
                    break;
                }

            size_t i = 0;
            for (; i < idx.size(); ++i) {
                if (++idx[i] < sorts[occs[i]].size())
                    break;
                idx[i] = 0;
            }
            if (i == idx.size())
                break;
            if (occs.empty())
                break;
        }
    }

    for (const auto& a : g.axioms)
        for (const auto& s : sorts[a])
            out.grammar.axioms.push_back(out.names.at({a, sort_key(s)}));
    return out;
}

Derivation translate_derivation(const Grammar& g, const TypeTable& base,
                                const TranslatedGrammar& tg, const Derivation& d) {
    // Reconstruct the derivation tree: each step consumes one open occurrence
    // (preorder across the sentential term) and opens its rhs occurrences.
    struct Node {
        int rule = -1;
        std::vector<int> children; // node ids, preorder of the rhs occurrences
        std::string nt;
        PortSet sort;
    };
    std::vector<Node> nodes;
    nodes.push_back({-1, {}, d.axiom, {}});
    std::vector<int> open{0};
    std::vector<int> step_node;
    for (const auto& s : d.steps) {
        if (s.position < 0 || s.position >= (int)open.size())
            throw std::runtime_error("derivation step position out of range");
        int id = open[s.position];
        nodes[id].rule = s.rule;
        const Rule& rule = g.rules.at(s.rule);
        if (rule.lhs != nodes[id].nt)
            throw std::runtime_error("derivation step lhs mismatch");
        auto occs = nt_occurrences(rule.rhs);
        std::vector<int> kids;
        for (const auto& o : occs) {
            nodes.push_back({-1, {}, o, {}});
            kids.push_back((int)nodes.size() - 1);
        }
        nodes[id].children = kids;
        open.erase(open.begin() + s.position);
        open.insert(open.begin() + s.position, kids.begin(), kids.end());
        step_node.push_back(id);
    }
    if (!open.empty())
        throw std::runtime_error("translate_derivation needs a complete derivation");

    std::function<PortSet(int)> sort_of = [&](int id) -> PortSet {
        Node& n = nodes[id];
        std::vector<PortSet> child_sorts;
        for (int c : n.children)
            child_sorts.push_back(sort_of(c));
        n.sort = infer_sort(g.rules.at(n.rule).rhs, base.alphabet, child_sorts);
        return n.sort;
    };
    PortSet root_sort = sort_of(0);

    Derivation out;
    out.axiom = tg.names.at({d.axiom, sort_key(root_sort)});
    for (size_t i = 0; i < d.steps.size(); ++i) {
        int id = step_node[i];
        std::string akey;
        for (int c : nodes[id].children)
            akey += sort_key(nodes[c].sort) + "|";
        auto it = tg.rule_index.find({nodes[id].rule, akey});
        if (it == tg.rule_index.end())
            throw std::runtime_error("no translated rule instance for this derivation step");
        out.steps.push_back({it->second, d.steps[i].position});
    }
    return out;
}

} // namespace vrhr
