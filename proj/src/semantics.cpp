#include "opc/semantics.hpp"

#include "opc/errors.hpp"
#include "opc/syntax.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace opc {

Calculus::Calculus(TheoryConfig config) : config_(std::move(config)) {
    config_.seal();
    config_.validate();
    theory_ = make_theory(config_);
    actions_ = config_.action_preorder();
}

bool Calculus::SessionOrder::leq(Gen a, Gen b) const {
    if (a == b)
        return true;
    const auto& ga = owner_.gens_[a];
    const auto& gb = owner_.gens_[b];
    if (ga.is_var || gb.is_var)
        return false;
    return owner_.actions_.test(ga.action, gb.action) && ga.target == gb.target;
}

Gen Calculus::var_gen(const std::string& name) {
    auto [it, inserted] = var_gens_.try_emplace(name, static_cast<Gen>(gens_.size()));
    if (inserted)
        gens_.push_back(GenInfo{true, name, 0, Term::zero()});
    return it->second;
}

Gen Calculus::pair_gen(std::size_t action, const Term& target) {
    auto [it, inserted] = pair_gens_.try_emplace(PairKey{action, target}, static_cast<Gen>(gens_.size()));
    if (inserted)
        gens_.push_back(GenInfo{false, {}, action, target});
    return it->second;
}

std::size_t Calculus::action_of(const std::string& name) const {
    auto a = config_.action_index(name);
    if (!a)
        throw InputError("unknown action '" + name + "'");
    return *a;
}

void Calculus::check_term(const Term& e) const {
    switch (e.kind()) {
    case TermKind::var:
        return;
    case TermKind::op:
        if (!theory_->admits(e.operation()))
            throw InputError("operation not available in theory '" + std::string(to_string(config_.theory)) + "'");
        break;
    case TermKind::prefix:
        (void)action_of(e.name());
        break;
    case TermKind::beta:
    case TermKind::mu:
        break;
    }
    for (const auto& c : e.children())
        check_term(c);
}

Element Calculus::step(const Term& e) {
    if (auto it = steps_.find(e); it != steps_.end())
        return it->second;
    Element out;
    switch (e.kind()) {
    case TermKind::var:
        out = theory_->unit(var_gen(e.name()));
        break;
    case TermKind::op: {
        std::vector<Element> args;
        for (const auto& c : e.children())
            args.push_back(step(c));
        out = theory_->apply(order_, e.operation(), args);
        break;
    }
    case TermKind::prefix:
        out = theory_->unit(pair_gen(action_of(e.name()), e.body()));
        break;
    case TermKind::beta:
        out = theory_->lfp(var_gen(e.name()), step(e.body()));
        break;
    case TermKind::mu: {
        Element resolved = theory_->lfp(var_gen(e.name()), step(e.body()));
        out = guarded_substitute(resolved, e, e.name());
        break;
    }
    }
    steps_.emplace(e, out);
    return out;
}

Element Calculus::guarded_substitute(const Element& p, const Term& g, const std::string& v) {
    // Interning may grow gens_, so copy what is needed before calling pair_gen.
    return theory_->rename(order_, p, [&](Gen x) {
        if (gens_[x].is_var)
            return x;
        std::size_t action = gens_[x].action;
        Term target = gens_[x].target;
        return pair_gen(action, substitute(target, g, v));
    });
}

OrderedAutomaton Calculus::reachable(const Term& e) {
    std::vector<Term> states{e};
    std::vector<Element> steps;
    std::unordered_map<std::string, std::size_t> index{{format_term(e, config_), 0}};
    std::set<std::string> vars;
    for (std::size_t i = 0; i < states.size(); ++i) {
        steps.push_back(step(states[i]));
        for (Gen g : theory_->support(steps.back())) {
            if (gens_[g].is_var) {
                vars.insert(gens_[g].var);
                continue;
            }
            Term target = gens_[g].target;
            auto [it, inserted] = index.try_emplace(format_term(target, config_), states.size());
            if (inserted) {
                if (states.size() >= config_.limits.max_states)
                    throw ResourceError("more than " + std::to_string(config_.limits.max_states) +
                                        " reachable states");
                states.push_back(std::move(target));
            }
        }
    }

    OrderedAutomaton out(config_, {vars.begin(), vars.end()}, states.size());
    DiscreteOrder discrete;
    for (std::size_t i = 0; i < states.size(); ++i) {
        auto encoded = theory_->rename(discrete, steps[i], [&](Gen g) {
            const auto& info = gens_[g];
            if (info.is_var)
                return out.var_gen(*out.var_index(info.var));
            return out.pair_gen(info.action, index.at(format_term(info.target, config_)));
        });
        out.set_branch(i, std::move(encoded));
        out.set_label(i, format_term(states[i], config_));
    }
    return out;
}

} // namespace opc
