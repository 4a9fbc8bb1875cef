#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vrhr/grammar.hpp"
#include "vrhr/system.hpp"

namespace vrhr {

/// Canonical names for the generated process types, places, transitions and
/// ports of the routed encoding.
namespace enc_names {
std::string half_type(const std::string& p);
std::string router_type(const std::string& t);
std::string pend_place(const std::string& t);
std::string req_trans(const std::string& t);
std::string fin_trans(const std::string& t);
std::string idle_place(const std::string& t);
std::string active_place(const std::string& t);
std::string wait_place(const std::string& t);
std::string reply_place(const std::string& t);
std::string recv_trans(const std::string& t);
std::string fwd_trans(const std::string& t);
std::string ack_trans(const std::string& t);
std::string reset_trans(const std::string& t);
std::string half_port(const std::string& pi);
std::string rep_port(const std::string& pi, const std::string& t);
std::string bar_port(const std::string& pi, const std::string& t);
// Forward routing labels and their reverses.
EdgeLabel request_label(const std::string& t);  // (req_t, recv_t)
EdgeLabel forward_label(const std::string& t);  // (fwd_t, recv_t)
EdgeLabel commit_label(const std::string& t);   // (reset_t, fin_t)
EdgeLabel ack_label(const std::string& t);      // (reset_t, ack_t)
} // namespace enc_names

/// Splits every observable transition t of p into an attempt req_t and a
/// remote commit fin_t around a fresh place pend_t.
ProcessType halve(const ProcessType& p);

/// The four-place relay process for one observable transition.
ProcessType make_router(const std::string& obs_transition);

/// The routed counterpart of a type table: halved types, one router type per
/// observable transition, the port alphabet {half_pi, rep(pi,t), bar(pi,t)}
/// and the epsilon edge-label alphabet with its reverse pairing.
struct ExpandedAlphabet {
    TypeTable table;
    EpsilonAlphabet epsilon;
    std::map<std::string, std::string> router_transition; // router type name -> t
    std::map<std::string, std::string> half_base;         // half type name -> p
};

ExpandedAlphabet expand_type_table(const TypeTable& base);

/// Edge bundle graph for a relabeling: for every pair (pi, pi') of alpha and
/// every observable t of pi's type, wires the previous representative of
/// (pi,t) to the fresh copy of (pi',t). Returns nullptr for the empty alpha
/// (the identity of composition).
TermPtr enc(const std::vector<std::pair<std::string, std::string>>& alpha,
            const TypeTable& base);

/// The inductive VR -> HR term translation. Nonterminal occurrences take
/// their sorts (and replacement names) from the two parallel vectors in
/// preorder occurrence order; both empty for ground terms.
TermPtr expand_term(const TermPtr& theta, const TypeTable& base,
                    const std::vector<PortSet>& nt_sorts = {},
                    const std::vector<std::string>& nt_names = {});

/// L^e: keeps L on the original places, labels active_t by L(pre(t)) and
/// reply_t by L(post(t)), undefined everywhere else.
PlaceLabeling lift_variable_labeling(const PlaceLabeling& l, const TypeTable& base);

/// Checks that every nonempty edge set between a vertex pair of a routed
/// system matches exactly one of: half-to-router attempt bundle, router
/// rendezvous edge, or router-to-router forward bundle.
ValidationReport check_edge_trichotomy(const System& s, const ExpandedAlphabet& exp);

/// Result of translating a VR grammar: nonterminals are annotated with the
/// sort they derive (a nonterminal deriving several sorts becomes a family).
struct TranslatedGrammar {
    Grammar grammar; // HR
    std::map<std::string, std::vector<PortSet>> nt_sorts;             // base NT -> derivable sorts
    std::map<std::pair<std::string, std::string>, std::string> names; // (NT, sort key) -> annotated
    // (base rule index, annotated child sorts key) -> translated rule index
    std::map<std::pair<int, std::string>, int> rule_index;
};

std::string sort_key(const PortSet& s);

TranslatedGrammar translate_grammar(const Grammar& g, const TypeTable& base);

/// Maps a complete derivation of the base grammar onto the derivation of the
/// translated grammar that produces expand_term of the derived term.
Derivation translate_derivation(const Grammar& g, const TypeTable& base,
                                const TranslatedGrammar& tg, const Derivation& d);

} // namespace vrhr
