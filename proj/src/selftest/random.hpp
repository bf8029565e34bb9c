#pragma once

#include "opc/automaton.hpp"
#include "opc/config.hpp"
#include "opc/fragments.hpp"
#include "opc/kernel.hpp"
#include "opc/solver.hpp"
#include "opc/term.hpp"

#include <random>
#include <string>
#include <vector>

namespace opc::selftest {

using Rng = std::mt19937_64;

/// Uniform integer in [lo, hi].
std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi);
bool coin(Rng& rng, double p = 0.5);

/// p/q with 1 ≤ q ≤ max_den and 0 ≤ p ≤ q.
Rational random_weight(Rng& rng, std::size_t max_den);

/// Closed vocabulary used by the random suites: atoms {b, c}, actions {a, d}
/// (with a ≤ d when `ordered_actions`).
TheoryConfig small_config(TheoryKind kind, bool ordered_actions = false);

Operation random_operation(Rng& rng, const TheoryConfig& config, std::size_t max_den = 4);

/// Subdistribution over the given generators, at most `support` of them.
ConvexPayload random_subdistribution(Rng& rng, const std::vector<Gen>& gens, std::size_t support,
                                     std::size_t max_den);

/// Random canonical element over generators {0, ..., gens-1}.
Element random_element(Rng& rng, const Theory& theory, const GeneratorOrder& ord, std::size_t gens,
                       std::size_t max_den);

/// S-term over leaves {0, ..., gens-1} with at most `ops` operation nodes.
STerm random_sterm(Rng& rng, const TheoryConfig& config, std::size_t gens, std::size_t ops,
                   std::size_t max_den = 12);

/// Random preorder on n points that is also antisymmetric.
Relation random_partial_order(Rng& rng, std::size_t n);

struct TermShape {
    std::vector<std::string> free_vars{"v", "w"};
    std::vector<std::string> binders{"x", "y"};
    std::size_t max_size = 10;
    bool binders_allowed = true;
};

/// Random process term of size at most shape.max_size.
Term random_term(Rng& rng, const TheoryConfig& config, const TermShape& shape = {});

/// Random expression; `star_only` avoids polystar patterns and constants,
/// `constants` allows `$v`.
Expr random_expr(Rng& rng, const TheoryConfig& config, std::size_t max_size, bool star_only, bool constants);

/// Random equation system over unknowns x0..x{n-1}.
EquationSystem random_system(Rng& rng, const TheoryConfig& config, std::size_t unknowns);

/// Random automaton with the given vars, discrete order, `config` sealed.
OrderedAutomaton random_automaton(Rng& rng, const TheoryConfig& config, std::size_t states,
                                  const std::vector<std::string>& vars, std::size_t max_den = 4);

} // namespace opc::selftest
