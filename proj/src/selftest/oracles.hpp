#pragma once

#include "opc/automaton.hpp"
#include "opc/config.hpp"
#include "opc/kernel.hpp"
#include "opc/relation.hpp"

// Reference implementations used to cross-check the library. They favour
// obviousness over speed and share no code with the routines they check.

namespace opc::selftest {

/// Heavier-higher order by enumerating every subset of the joint support
/// and keeping the upward-closed ones. `order` is a preorder on generators.
bool hh_leq_bruteforce(const Relation& order, const ConvexPayload& lhs, const ConvexPayload& rhs);

/// Evaluates an S-term directly: guards by walking the tree per atom,
/// convex choices by accumulating products of weights, joins as leaf sets
/// (all leaves kept, no order).
Element normalize_oracle(const TheoryConfig& config, const STerm& t);

/// Greatest bisimulation by pairwise refinement: a pair survives a round
/// when its branches agree on the mass (or presence) sent into every class
/// of the current relation.
Relation naive_bisimulation(const OrderedAutomaton& a);

/// Simulation on the transition-system reading of a semilattice automaton:
/// x ≼ y when every return of x is a return of y and every a-step of x is
/// matched by a step of y with a greater or equal action into a state
/// simulating the target.
Relation naive_lts_simulation(const OrderedAutomaton& a);

} // namespace opc::selftest
