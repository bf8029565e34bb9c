#pragma once

#include "opc/config.hpp"
#include "opc/kernel.hpp"
#include "opc/relation.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace opc {

/// Decoded branch generator: a return variable, or an action paired with a
/// successor state.
struct BranchGen {
    bool is_var = false;
    std::size_t var = 0;
    std::size_t action = 0;
    std::size_t target = 0;
};

/// Finite ordered system: states, one branch element per state over
/// Var ⊎ Act × States, and a declared state preorder.
///
/// Generators are numbered vars first, then (action, state) pairs in
/// action-major order.
class OrderedAutomaton {
public:
    /// `config` must be sealed. Branches start out as 0, the order discrete.
    OrderedAutomaton(TheoryConfig config, std::vector<std::string> vars, std::size_t states);

    const TheoryConfig& config() const noexcept { return config_; }
    const Theory& theory() const noexcept { return *theory_; }
    const std::shared_ptr<const Theory>& theory_ptr() const noexcept { return theory_; }
    const Relation& action_order() const noexcept { return actions_; }

    std::size_t size() const noexcept { return branches_.size(); }
    const std::vector<std::string>& vars() const noexcept { return vars_; }
    std::optional<std::size_t> var_index(std::string_view name) const;

    std::size_t generator_count() const noexcept { return vars_.size() + config_.actions.size() * size(); }
    Gen var_gen(std::size_t var) const { return static_cast<Gen>(var); }
    Gen pair_gen(std::size_t action, std::size_t state) const {
        return static_cast<Gen>(vars_.size() + action * size() + state);
    }
    BranchGen decode(Gen g) const;

    const Element& branch(std::size_t state) const { return branches_.at(state); }
    /// Stores the branch canonicalized under the declared order.
    void set_branch(std::size_t state, Element branch);

    const Relation& order() const noexcept { return order_; }
    /// Replaces the declared state order by the preorder generated by `order`.
    void set_order(Relation order);

    /// Order on return variables; discrete unless set explicitly.
    const Relation& var_order() const noexcept { return var_order_; }
    void set_var_order(Relation order);

    const std::string& label(std::size_t state) const { return labels_.at(state); }
    void set_label(std::size_t state, std::string label) { labels_.at(state) = std::move(label); }

    /// Successor states named by pair generators of the branch, sorted.
    std::vector<std::size_t> successors(std::size_t state) const;

    /// Throws InputError when a branch is ill-shaped or the structure map is
    /// not monotone for the declared order.
    void validate() const;

private:
    TheoryConfig config_;
    std::shared_ptr<const Theory> theory_;
    Relation actions_;
    std::vector<std::string> vars_;
    std::vector<Element> branches_;
    std::vector<std::string> labels_;
    Relation order_;
    Relation var_order_;
};

/// Generator order of an automaton's branch elements when states are
/// ordered by `states`: variables by the automaton's variable order, pairs by
/// the action order times `states`, and variables never related to pairs.
class BranchOrder final : public GeneratorOrder {
public:
    BranchOrder(const OrderedAutomaton& automaton, const Relation& states)
        : automaton_(automaton), states_(states) {}

    bool contains(Gen g) const override { return g < automaton_.generator_count(); }
    bool leq(Gen a, Gen b) const override;

private:
    const OrderedAutomaton& automaton_;
    const Relation& states_;
};

/// Disjoint union: states of `lhs` first, then those of `rhs` shifted by
/// lhs.size(). Return variables are merged by name. Both sides must share
/// theory, atoms, actions and action order.
OrderedAutomaton disjoint_union(const OrderedAutomaton& lhs, const OrderedAutomaton& rhs);

} // namespace opc
