#pragma once

#include "opc/automaton.hpp"
#include "opc/kernel.hpp"
#include "opc/term.hpp"

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace opc {

/// A session for the small-step semantics of one theory and vocabulary.
///
/// Generators of branch elements are interned here: return variables by
/// name and ⟨action, term⟩ pairs by structural equality. Results of step()
/// are memoized, so a session is cheap to query repeatedly but must not be
/// shared between threads.
class Calculus {
public:
    /// Seals and validates the configuration.
    explicit Calculus(TheoryConfig config);
    Calculus(const Calculus&) = delete;
    Calculus& operator=(const Calculus&) = delete;

    struct GenInfo {
        bool is_var = false;
        std::string var;
        std::size_t action = 0;
        Term target = Term::zero();
    };

    const TheoryConfig& config() const noexcept { return config_; }
    const Theory& theory() const noexcept { return *theory_; }
    const std::shared_ptr<const Theory>& theory_ptr() const noexcept { return theory_; }

    Gen var_gen(const std::string& name);
    Gen pair_gen(std::size_t action, const Term& target);
    const GenInfo& describe(Gen g) const { return gens_.at(g); }
    /// Return variables discrete; pairs ordered by the action order on equal targets.
    const GeneratorOrder& order() const noexcept { return order_; }

    /// The branch element ε(e).
    Element step(const Term& e);

    /// p[g//v]: substitutes g for v inside the targets of pair generators and
    /// leaves return variables alone.
    Element guarded_substitute(const Element& p, const Term& g, const std::string& v);

    /// The finite automaton of terms reachable from e, with e as state 0 and
    /// the discrete state order. Throws ResourceError past limits.max_states.
    OrderedAutomaton reachable(const Term& e);

    /// Checks actions against the vocabulary and operations against the theory.
    void check_term(const Term& e) const;

private:
    class SessionOrder final : public GeneratorOrder {
    public:
        explicit SessionOrder(const Calculus& owner) : owner_(owner) {}
        bool contains(Gen g) const override { return g < owner_.gens_.size(); }
        bool leq(Gen a, Gen b) const override;

    private:
        const Calculus& owner_;
    };

    struct PairKey {
        std::size_t action;
        Term target;
        bool operator==(const PairKey& o) const { return action == o.action && target == o.target; }
    };
    struct PairKeyHash {
        std::size_t operator()(const PairKey& k) const noexcept { return k.target.hash() * 31 + k.action; }
    };

    std::size_t action_of(const std::string& name) const;

    TheoryConfig config_;
    std::shared_ptr<const Theory> theory_;
    Relation actions_;
    SessionOrder order_{*this};
    std::vector<GenInfo> gens_;
    std::unordered_map<std::string, Gen> var_gens_;
    std::unordered_map<PairKey, Gen, PairKeyHash> pair_gens_;
    std::unordered_map<Term, Element, TermHash> steps_;
};

} // namespace opc
