#pragma once

#include "opc/automaton.hpp"
#include "opc/relation.hpp"
#include "opc/semantics.hpp"
#include "opc/term.hpp"

#include <optional>
#include <string>
#include <vector>

namespace opc {

/// Indeterminates with a declared preorder and one right-hand side each.
/// Names that are not indeterminates are return variables.
struct EquationSystem {
    std::vector<std::string> unknowns;
    std::vector<Term> rhs;
    Relation order;

    std::size_t size() const noexcept { return unknowns.size(); }
    std::optional<std::size_t> index(std::string_view name) const;
};

/// One equation per state, built from a representative of its branch; the
/// indeterminate order is the declared state order. Indeterminates are
/// named `x0`, `x1`, ... unless that clashes with a return variable, in which
/// case the prefix is extended with primes.
EquationSystem associated_system(const OrderedAutomaton& a);

/// Throws InputError naming the first equation in which some indeterminate
/// occurs unguarded.
void check_system_guarded(const EquationSystem& system);

/// Throws InputError unless every declared pair x ≤ y has rhs(x) below rhs(y),
/// first syntactically and otherwise behaviourally with the indeterminates
/// read as return variables ordered like the system.
void check_monotone(const EquationSystem& system, const TheoryConfig& config);

/// The unique solution of a guarded system, one closed-over-indeterminates
/// term per unknown. The minimal indeterminate eliminated at each step is the
/// first one in declaration order, or the last one with `prefer_last`.
std::vector<Term> solve_guarded(const EquationSystem& system, bool prefer_last = false);

/// solve_guarded(associated_system(a)) at `state`.
Term canonical_term(const OrderedAutomaton& a, std::size_t state);

/// Derivability of e ⊑ f, decided through the behaviour order.
bool prove_leq(Calculus& calc, const Term& e, const Term& f);

enum class Rule {
    ie,    ///< theory inequation p ≤ q instantiated at args
    s,     ///< σ₁ ≤ σ₂ gives σ₁(e₁, e₂) ⊑ σ₂(e₁, e₂)
    act,   ///< a₁ ≤ a₂ gives a₁.e ⊑ a₂.e
    r1a,   ///< βv p(v, f⃗) ≡ (lfp_v p)(f⃗) when v is guarded in each fᵢ
    r1b,   ///< βv e[μv e // v] ⊑ μv e
    r2a,   ///< p(g, f⃗) ⊑ g gives βv p(v, f⃗) ⊑ g
    r2b,   ///< βv e[g // v] ⊑ g gives μv e ⊑ g
    r3,    ///< g ⊑ βv e[g // v] gives g ⊑ μv e
    ufp,   ///< v guarded in e and e[g/v] ≡ g give μv e ≡ g
    unfold ///< μv e ≡ e[μv e / v]
};

std::string_view to_string(Rule rule);

/// One rule application. Which fields matter depends on the rule:
/// `pattern` / `pattern_rhs` are S-terms whose leaf 0 is `var` (r1a, r2a) or
/// args[0] (ie), and whose leaf i ≥ 1 is args[i-1].
struct Derivation {
    Rule rule = Rule::ie;
    std::string var;
    Term body = Term::zero();
    Term bound = Term::zero();
    std::vector<Term> args;
    STerm pattern;
    STerm pattern_rhs;
    Operation lower_op;
    Operation upper_op;
    std::string lower_action;
    std::string upper_action;
};

/// Conclusion of the rule as (lhs, rhs, two-sided).
struct Judgement {
    Term lhs = Term::zero();
    Term rhs = Term::zero();
    bool equation = false;
};

/// Premises and conclusion of a derivation. Throws InputError when the
/// instantiation is malformed.
struct RuleInstance {
    bool side_conditions = true;
    std::vector<Judgement> premises;
    Judgement conclusion;
};
RuleInstance instantiate_rule(Calculus& calc, const Derivation& d);

/// True iff the side conditions hold and the conclusion holds behaviourally
/// whenever all premises do. Vacuously true when a premise fails.
bool check_axiom_instance(Calculus& calc, const Derivation& d);

} // namespace opc
