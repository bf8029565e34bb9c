#include "opc/automaton.hpp"

#include "opc/errors.hpp"

#include <algorithm>
#include <set>

namespace opc {

OrderedAutomaton::OrderedAutomaton(TheoryConfig config, std::vector<std::string> vars, std::size_t states)
    : config_(std::move(config)),
      theory_(make_theory(config_)),
      actions_(config_.action_preorder()),
      vars_(std::move(vars)),
      branches_(states, theory_->zero()),
      labels_(states),
      order_(Relation::identity(states)),
      var_order_(Relation::identity(vars_.size())) {
    if (std::set<std::string>(vars_.begin(), vars_.end()).size() != vars_.size())
        throw InputError("duplicate return variable in automaton");
}

std::optional<std::size_t> OrderedAutomaton::var_index(std::string_view name) const {
    auto it = std::find(vars_.begin(), vars_.end(), name);
    if (it == vars_.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - vars_.begin());
}

BranchGen OrderedAutomaton::decode(Gen g) const {
    BranchGen out;
    if (g < vars_.size()) {
        out.is_var = true;
        out.var = g;
        return out;
    }
    std::size_t k = g - vars_.size();
    out.action = k / size();
    out.target = k % size();
    return out;
}

void OrderedAutomaton::set_branch(std::size_t state, Element branch) {
    if (!theory_->well_formed(branch))
        throw InputError("branch element does not match theory '" + std::string(to_string(theory_->kind())) + "'");
    for (Gen g : theory_->support(branch))
        if (g >= generator_count())
            throw InputError("branch of state " + std::to_string(state) + " names an unknown generator");
    BranchOrder ord(*this, order_);
    branches_.at(state) = theory_->canonicalize(ord, std::move(branch));
}

void OrderedAutomaton::set_order(Relation order) {
    if (order.size() != size())
        throw InputError("state order has the wrong size");
    order.close_preorder();
    order_ = std::move(order);
    BranchOrder ord(*this, order_);
    for (auto& b : branches_)
        b = theory_->canonicalize(ord, std::move(b));
}

void OrderedAutomaton::set_var_order(Relation order) {
    if (order.size() != vars_.size())
        throw InputError("variable order has the wrong size");
    order.close_preorder();
    var_order_ = std::move(order);
}

std::vector<std::size_t> OrderedAutomaton::successors(std::size_t state) const {
    std::vector<std::size_t> out;
    for (Gen g : theory_->support(branches_.at(state))) {
        auto d = decode(g);
        if (!d.is_var)
            out.push_back(d.target);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void OrderedAutomaton::validate() const {
    for (std::size_t s = 0; s < size(); ++s) {
        if (!theory_->well_formed(branches_[s]))
            throw InputError("branch of state " + std::to_string(s) + " is ill-formed");
        for (Gen g : theory_->support(branches_[s]))
            if (g >= generator_count())
                throw InputError("branch of state " + std::to_string(s) + " names an unknown generator");
    }
    BranchOrder ord(*this, order_);
    for (auto [x, y] : order_.strict_pairs())
        if (!theory_->leq(ord, branches_[x], branches_[y]))
            throw InputError("structure map is not monotone: state " + std::to_string(x) + " is declared below " +
                             std::to_string(y) + " but its branch is not");
}

bool BranchOrder::leq(Gen a, Gen b) const {
    if (a == b)
        return true;
    auto da = automaton_.decode(a);
    auto db = automaton_.decode(b);
    if (da.is_var != db.is_var)
        return false;
    if (da.is_var)
        return automaton_.var_order().test(da.var, db.var);
    return automaton_.action_order().test(da.action, db.action) && states_.test(da.target, db.target);
}

namespace {

bool same_signature(const TheoryConfig& a, const TheoryConfig& b) {
    return a.theory == b.theory && a.atoms == b.atoms && a.actions == b.actions &&
           Relation(a.action_preorder()) == b.action_preorder();
}

} // namespace

OrderedAutomaton disjoint_union(const OrderedAutomaton& lhs, const OrderedAutomaton& rhs) {
    if (!same_signature(lhs.config(), rhs.config()))
        throw InputError("cannot combine automata over different theories or vocabularies");
    std::set<std::string> names(lhs.vars().begin(), lhs.vars().end());
    names.insert(rhs.vars().begin(), rhs.vars().end());
    OrderedAutomaton out(lhs.config(), {names.begin(), names.end()}, lhs.size() + rhs.size());

    Relation var_order(out.vars().size());
    Relation order(out.size());
    auto embed = [&](const OrderedAutomaton& part, std::size_t offset) {
        std::vector<Gen> var_map(part.vars().size());
        for (std::size_t v = 0; v < part.vars().size(); ++v)
            var_map[v] = static_cast<Gen>(*out.var_index(part.vars()[v]));
        for (auto [a, b] : part.var_order().strict_pairs())
            var_order.set(var_map[a], var_map[b]);
        for (auto [x, y] : part.order().strict_pairs())
            order.set(offset + x, offset + y);
        DiscreteOrder discrete;
        for (std::size_t s = 0; s < part.size(); ++s) {
            auto renamed = part.theory().rename(discrete, part.branch(s), [&](Gen g) {
                auto d = part.decode(g);
                return d.is_var ? var_map[d.var] : out.pair_gen(d.action, offset + d.target);
            });
            out.set_branch(offset + s, std::move(renamed));
            out.set_label(offset + s, part.label(s));
        }
    };
    embed(lhs, 0);
    embed(rhs, lhs.size());
    out.set_var_order(std::move(var_order));
    out.set_order(std::move(order));
    return out;
}

} // namespace opc
