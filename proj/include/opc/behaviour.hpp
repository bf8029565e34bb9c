#pragma once

#include "opc/automaton.hpp"
#include "opc/kernel.hpp"
#include "opc/relation.hpp"
#include "opc/semantics.hpp"
#include "opc/term.hpp"

#include <cstddef>
#include <span>

namespace opc {

/// Branch order of `a` when states are related by `states`: element_leq over
/// Var ⊎ Act × States with pairs ordered by the action order times `states`.
bool lifted_leq(const OrderedAutomaton& a, const Relation& states, const Element& p, const Element& q);

/// Greatest fixpoint of R ↦ {(x, y) : lifted_leq(a, R, ϑ(x), ϑ(y))}, iterated
/// from the total relation. `rounds`, when given, receives the number of
/// refinement rounds taken.
Relation behaviour_preorder(const OrderedAutomaton& a, std::size_t* rounds = nullptr);

/// Largest simulation: each related pair (x, y) admits a weak coupling of
/// ϑ(x) below and ϑ(y) above over pairs that are themselves related.
Relation similarity(const OrderedAutomaton& a);

/// Coarsest equivalence under which related states have equal branches.
/// Throws InputError unless the declared state order is discrete.
Relation ordinary_bisimilarity(const OrderedAutomaton& a);

/// Weak coupling of p and q, both over generators 0..h.size()-1, along the
/// pairs (u, v) with h(u) ≤ h(v) in `ctx`. Throws InputError when h leaves
/// the context or the elements are ill-formed.
bool weak_coupling_exists(const Theory& theory, const GeneratorContext& ctx, std::span<const Gen> h,
                          const Element& p, const Element& q);

/// Reachable automata of two terms joined by disjoint union; e is state
/// `lhs_root`, f is state `rhs_root`.
struct TermPair {
    OrderedAutomaton automaton;
    std::size_t lhs_root = 0;
    std::size_t rhs_root = 0;
};
TermPair combine(Calculus& calc, const Term& e, const Term& f);

/// e ≤_b f.
bool behavioural_leq(Calculus& calc, const Term& e, const Term& f);
/// e ≤_b f and f ≤_b e.
bool behavioural_equiv(Calculus& calc, const Term& e, const Term& f);
/// e is simulated by f.
bool simulated_by(Calculus& calc, const Term& e, const Term& f);
/// Ordinary bisimilarity of the two roots.
bool bisimilar(Calculus& calc, const Term& e, const Term& f);

} // namespace opc
