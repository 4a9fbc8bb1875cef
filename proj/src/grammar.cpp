#include "vrhr/grammar.hpp"

#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace vrhr {

ValidationReport Grammar::validate(const VertexLabelAlphabet& alphabet) const {
    ValidationReport rep;
    std::set<std::string> nts(nonterminals.begin(), nonterminals.end());
    if (axioms.empty())
        rep.add("grammar has no axiom");
    for (const auto& a : axioms)
        if (!nts.count(a))
            rep.add("axiom '" + a + "' is not a declared nonterminal");
    for (size_t i = 0; i < rules.size(); ++i) {
        const Rule& r = rules[i];
        if (!nts.count(r.lhs))
            rep.add("rule " + std::to_string(i) + " rewrites undeclared nonterminal '" + r.lhs +
                    "'");
        std::function<void(const TermPtr&)> check_refs = [&](const TermPtr& t) {
            if (!t)
                return;
            if (t->kind == Term::Kind::Nonterminal && !nts.count(t->nonterminal))
                rep.add("rule " + std::to_string(i) + " references undeclared nonterminal '" +
                        t->nonterminal + "'");
            check_refs(t->left);
            check_refs(t->right);
        };
        check_refs(r.rhs);
        // Structural checks only; sort constraints apply per derived ground term.
        ValidationReport tr = validate_term(r.rhs, alphabet, algebra, false);
        for (auto& v : tr.items)
            rep.add("rule " + std::to_string(i) + ": " + v.message);
    }
    return rep;
}

namespace {

// Rebuilds the path to the nonterminal occurrence at preorder index `position`.
TermPtr replace_occurrence(const TermPtr& t, int& remaining, const Rule& rule, bool& done) {
    if (!t || done)
        return t;
    if (t->kind == Term::Kind::Nonterminal) {
        if (remaining-- == 0) {
            if (t->nonterminal != rule.lhs)
                throw std::runtime_error("occurrence is '" + t->nonterminal +
                                         "', rule rewrites '" + rule.lhs + "'");
            done = true;
            return rule.rhs;
        }
        return t;
    }
    TermPtr l = replace_occurrence(t->left, remaining, rule, done);
    TermPtr r = done ? t->right : replace_occurrence(t->right, remaining, rule, done);
    if (l == t->left && r == t->right)
        return t;
    Term copy = *t;
    copy.left = l;
    copy.right = r;
    return std::make_shared<const Term>(std::move(copy));
}

void collect_nonterminals(const TermPtr& t, std::vector<std::string>& out) {
    if (!t)
        return;
    if (t->kind == Term::Kind::Nonterminal) {
        out.push_back(t->nonterminal);
        return;
    }
    collect_nonterminals(t->left, out);
    collect_nonterminals(t->right, out);
}

} // namespace

TermPtr apply_step(const TermPtr& t, const Rule& rule, int position) {
    int remaining = position;
    bool done = false;
    TermPtr out = replace_occurrence(t, remaining, rule, done);
    if (!done)
        throw std::runtime_error("nonterminal occurrence " + std::to_string(position) +
                                 " is out of range");
    return out;
}

TermPtr replay_derivation(const Grammar& g, const Derivation& d) {
    TermPtr t = mk_nonterminal(d.axiom);
    for (const auto& s : d.steps) {
        if (s.rule < 0 || s.rule >= (int)g.rules.size())
            throw std::runtime_error("derivation step cites rule " + std::to_string(s.rule) +
                                     " out of range");
        t = apply_step(t, g.rules[s.rule], s.position);
    }
    return t;
}

namespace {

// Label/degree multiset fingerprint. Above the isomorphism cap two distinct
// graphs with equal fingerprints would be merged; tolerated at this scale.
std::string graph_fingerprint(const LabeledGraph& g) {
    std::multiset<std::string> vsig;
    std::vector<std::map<std::string, int>> out_deg(g.vertex_count), in_deg(g.vertex_count);
    for (const auto& e : g.edges) {
        out_deg[e.src][e.label]++;
        in_deg[e.dst][e.label]++;
    }
    for (Vertex v = 0; v < g.vertex_count; ++v) {
        std::ostringstream os;
        for (const auto& l : g.labels[v])
            os << l << ";";
        os << "|";
        for (const auto& [l, d] : out_deg[v])
            os << l << ":" << d << ";";
        os << "|";
        for (const auto& [l, d] : in_deg[v])
            os << l << ":" << d << ";";
        vsig.insert(os.str());
    }
    std::ostringstream os;
    os << g.vertex_count << "#" << g.edges.size() << "#";
    for (const auto& s : vsig)
        os << s << "&";
    return os.str();
}

} // namespace

EnumOutcome enumerate_language(const Grammar& g, const VertexLabelAlphabet& alphabet,
                               const EnumBounds& bounds,
                               const std::function<bool(EnumItem&&)>& yield) {
    EnumOutcome outcome;
    struct Item {
        TermPtr term;
        Derivation derivation;
    };
    std::deque<Item> frontier;
    std::unordered_set<std::string> seen_terms;
    std::map<std::string, std::vector<LabeledGraph>> seen_graphs; // fingerprint -> reps
    size_t examined = 0;

    for (const auto& a : g.axioms) {
        TermPtr t = mk_nonterminal(a);
        if (seen_terms.insert(print_term(t)).second)
            frontier.push_back({t, Derivation{a, {}}});
    }

    auto handle_ground = [&](const Item& it) -> bool {
        outcome.ground_terms++;
        LabeledGraph graph = eval_term(it.term, g.algebra, alphabet);
        if (graph.vertex_count > bounds.max_vertices)
            return true;
        std::string fp = graph_fingerprint(graph);
        auto& reps = seen_graphs[fp];
        if (graph.vertex_count <= 64) {
            for (const auto& r : reps)
                if (isomorphic(r, graph))
                    return true;
        } else if (!reps.empty()) {
            return true;
        }
        reps.push_back(graph);
        outcome.graphs_yielded++;
        bool go_on = yield(EnumItem{it.derivation, it.term, std::move(graph)});
        if (!go_on) {
            outcome.exhausted = false;
            outcome.truncation_reason = "stopped by caller";
            return false;
        }
        if (outcome.graphs_yielded >= bounds.max_graphs) {
            outcome.exhausted = false;
            outcome.truncation_reason = "max_graphs bound hit";
            return false;
        }
        return true;
    };

    while (!frontier.empty()) {
        Item it = std::move(frontier.front());
        frontier.pop_front();
        if (++examined > bounds.max_terms) {
            outcome.exhausted = false;
            outcome.truncation_reason = "max_terms bound hit";
            return outcome;
        }

        std::vector<std::string> occs;
        collect_nonterminals(it.term, occs);
        if (occs.empty()) {
            if (!handle_ground(it))
                return outcome;
            continue;
        }
        if ((int)it.derivation.steps.size() >= bounds.max_steps)
            continue;
        // Every nonterminal eventually derives at least one vertex, so this
        // lower bound is sound for VR terms (no fusion).
        if (g.algebra == Algebra::VR &&
            count_vertex_leaves(it.term) + (int)occs.size() > bounds.max_vertices)
            continue;

        for (size_t ri = 0; ri < g.rules.size(); ++ri) {
            for (size_t pos = 0; pos < occs.size(); ++pos) {
                if (occs[pos] != g.rules[ri].lhs)
                    continue;
                TermPtr next = apply_step(it.term, g.rules[ri], (int)pos);
                if (!seen_terms.insert(print_term(next)).second)
                    continue;
                Derivation d = it.derivation;
                d.steps.push_back({(int)ri, (int)pos});
                frontier.push_back({next, std::move(d)});
            }
        }
    }
    return outcome;
}

std::vector<EnumItem> enumerate_all(const Grammar& g, const VertexLabelAlphabet& alphabet,
                                    const EnumBounds& bounds, EnumOutcome* outcome) {
    std::vector<EnumItem> items;
    EnumOutcome out = enumerate_language(g, alphabet, bounds, [&](EnumItem&& it) {
        items.push_back(std::move(it));
        return true;
    });
    if (outcome)
        *outcome = out;
    return items;
}

} // namespace vrhr
