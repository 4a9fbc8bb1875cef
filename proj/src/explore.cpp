#include "vrhr/explore.hpp"

#include <algorithm>
#include <deque>

namespace vrhr {

std::vector<int> ExploreResult::path_to(int state_id) const {
    std::vector<int> out;
    int cur = state_id;
    while (pred[cur].first >= 0) {
        out.push_back(pred[cur].second);
        cur = pred[cur].first;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

ExploreResult explore(const BehaviorNet& b, size_t max_states) {
    ExploreResult r;
    r.index.reserve(1024);
    std::deque<int> queue;
    r.states.push_back(b.initial);
    r.index[b.initial] = 0;
    r.pred.push_back({-1, -1});
    queue.push_back(0);

    while (!queue.empty()) {
        int id = queue.front();
        queue.pop_front();
        const State s = r.states[id];
        for (size_t t = 0; t < b.transitions.size(); ++t) {
            const auto& bt = b.transitions[t];
            if (!b.enabled_in(s, bt))
                continue;
            State next = b.fire_in(s, bt);
            auto [it, fresh] = r.index.try_emplace(next, (int)r.states.size());
            if (!fresh)
                continue;
            if (r.states.size() >= max_states) {
                r.index.erase(it);
                r.exhaustive = false;
                return r;
            }
            r.states.push_back(std::move(next));
            r.pred.push_back({id, (int)t});
            queue.push_back((int)r.states.size() - 1);
        }
    }
    return r;
}

std::vector<uint64_t> state_counts(const BehaviorNet& b, const std::vector<int>& lifted,
                                   size_t var_count, const State& s) {
    std::vector<uint64_t> counts(var_count, 0);
    for (size_t v = 0; v < s.size(); ++v) {
        int vi = lifted[b.place_offset[v] + s[v]];
        if (vi >= 0)
            counts[vi]++;
    }
    return counts;
}

Valuation valuation_of(const BehaviorNet& b, const std::vector<int>& lifted,
                       const std::vector<std::string>& var_order, const State& s) {
    auto counts = state_counts(b, lifted, var_order.size(), s);
    Valuation val;
    for (size_t i = 0; i < var_order.size(); ++i)
        val[var_order[i]] = counts[i];
    return val;
}

ReachVerdict check_reachability(const BehaviorNet& b, const std::vector<int>& lifted,
                                const std::vector<std::string>& var_order, const FormulaPtr& f,
                                size_t max_states) {
    ReachVerdict verdict;
    CompiledFormula cf = compile_formula(f, var_order);

    ExploreResult r;
    std::deque<int> queue;
    r.states.push_back(b.initial);
    r.index[b.initial] = 0;
    r.pred.push_back({-1, -1});
    queue.push_back(0);

    auto check = [&](int id) {
        auto counts = state_counts(b, lifted, var_order.size(), r.states[id]);
        return cf.eval(counts);
    };

    if (check(0)) {
        verdict.status = ReachVerdict::Status::Sat;
        verdict.final_state = r.states[0];
        verdict.valuation = valuation_of(b, lifted, var_order, r.states[0]);
        verdict.states_explored = 1;
        return verdict;
    }

    bool truncated = false;
    while (!queue.empty()) {
        int id = queue.front();
        queue.pop_front();
        const State s = r.states[id];
        for (size_t t = 0; t < b.transitions.size(); ++t) {
            const auto& bt = b.transitions[t];
            if (!b.enabled_in(s, bt))
                continue;
            State next = b.fire_in(s, bt);
            auto [it, fresh] = r.index.try_emplace(next, (int)r.states.size());
            if (!fresh)
                continue;
            if (r.states.size() >= max_states) {
                r.index.erase(it);
                truncated = true;
                queue.clear();
                break;
            }
            r.states.push_back(std::move(next));
            r.pred.push_back({id, (int)t});
            int nid = (int)r.states.size() - 1;
            if (check(nid)) {
                verdict.status = ReachVerdict::Status::Sat;
                verdict.witness = r.path_to(nid);
                verdict.final_state = r.states[nid];
                verdict.valuation = valuation_of(b, lifted, var_order, r.states[nid]);
                verdict.states_explored = r.states.size();
                return verdict;
            }
            queue.push_back(nid);
        }
        if (truncated)
            break;
    }
    verdict.status = truncated ? ReachVerdict::Status::Truncated
                               : ReachVerdict::Status::UnsatWithinBound;
    verdict.states_explored = r.states.size();
    return verdict;
}

std::vector<std::string> variable_order(const PlaceLabeling& labeling, const FormulaPtr& formula) {
    std::set<std::string> vars;
    for (const auto& [q, x] : labeling)
        vars.insert(x);
    if (formula)
        for (const auto& x : free_vars(formula))
            vars.insert(x);
    return {vars.begin(), vars.end()};
}

PrpResult solve_prp(const Grammar& g, const TypeTable& table, const PlaceLabeling& labeling,
                    const FormulaPtr& formula, const PrpBounds& bounds) {
    PrpResult result;
    result.status = PrpResult::Status::NegativeWithinBound;
    auto var_order = variable_order(labeling, formula);

    bool any_truncated = false;
    EnumBounds eb;
    eb.max_steps = bounds.max_steps;
    eb.max_vertices = bounds.max_vertices;
    EnumOutcome outcome = enumerate_language(g, table.alphabet, eb, [&](EnumItem&& item) {
        System sys = System::from_graph(item.graph, table);
        BehaviorNet beh = build_behavior(sys, table);
        auto lifted = lift_labeling(beh, table, labeling, var_order);
        ReachVerdict v = check_reachability(beh, lifted, var_order, formula, bounds.max_states);
        result.systems_checked++;
        result.states_explored += v.states_explored;
        if (v.status == ReachVerdict::Status::Truncated)
            any_truncated = true;
        if (v.status == ReachVerdict::Status::Sat) {
            PrpWitness w;
            w.derivation = item.derivation;
            w.term = item.term;
            w.system = sys;
            w.firing = v.witness;
            for (int t : v.witness)
                w.firing_names.push_back(beh.transition_name(table, t));
            w.valuation = v.valuation;
            result.witness = std::move(w);
            result.status = PrpResult::Status::Positive;
            return false; // first witness in deterministic order
        }
        return true;
    });

    if (result.status == PrpResult::Status::Positive)
        return result;
    if (!outcome.exhausted) {
        result.status = PrpResult::Status::Truncated;
        result.truncation_reason = outcome.truncation_reason;
    } else if (any_truncated) {
        result.status = PrpResult::Status::Truncated;
        result.truncation_reason = "state exploration hit max_states";
    }
    return result;
}

} // namespace vrhr
