#pragma once

#include "opc/kernel.hpp"

namespace opc {

// The per-theory primitives behind the four Theory implementations, exposed
// for direct use and testing.

/// Every atom mapped to g is remapped to ⊥.
GuardedPayload guarded_lfp(Gen g, const GuardedPayload& p);

/// Heavier-higher order: θ₁(U) ≤ θ₂(U) for every upward-closed U, decided by
/// enumerating the upsets of the union of the supports. Throws ResourceError
/// when that union exceeds `max_support`.
bool convex_hh_leq(const GeneratorOrder& ord, const ConvexPayload& lhs, const ConvexPayload& rhs,
                   std::size_t max_support = Limits{}.max_support);

/// Conditioning on not hitting g: θ' / (1 - θ(g)), or empty when θ(g) = 1.
ConvexPayload convex_lfp(Gen g, const ConvexPayload& p);

/// r·lhs + (1 - r)·rhs.
ConvexPayload convex_combine(const Rational& r, const ConvexPayload& lhs, const ConvexPayload& rhs);

/// Downset inclusion: each element of lhs lies below some element of rhs.
bool semilattice_leq(const GeneratorOrder& ord, const SemilatticePayload& lhs, const SemilatticePayload& rhs);

/// Keeps the maximal elements; among equivalent generators the smallest stays.
SemilatticePayload semilattice_canonical(const GeneratorOrder& ord, std::vector<Gen> gens);

/// Conditioning applied independently at every atom.
ProbGkatPayload probgkat_lfp(Gen g, const ProbGkatPayload& p);

/// Is there a nonnegative flow f over admissible pairs with every row sum
/// equal to supply(x) and every column sum at most capacity(y)? Solved
/// exactly as a max-flow problem over rationals.
bool transport_feasible(const ConvexPayload& supply, const ConvexPayload& capacity, const GenRelation& admissible);

} // namespace opc
