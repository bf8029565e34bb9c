#include "opc/solver.hpp"

#include "opc/behaviour.hpp"
#include "opc/errors.hpp"
#include "opc/syntax.hpp"

#include <algorithm>
#include <map>

namespace opc {

std::optional<std::size_t> EquationSystem::index(std::string_view name) const {
    auto it = std::find(unknowns.begin(), unknowns.end(), name);
    if (it == unknowns.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - unknowns.begin());
}

namespace {

std::string indeterminate_prefix(const std::vector<std::string>& vars) {
    std::string base = "x";
    auto clashes = [&](const std::string& prefix) {
        return std::any_of(vars.begin(), vars.end(), [&](const std::string& v) {
            return v.size() > prefix.size() && v.compare(0, prefix.size(), prefix) == 0 &&
                   std::all_of(v.begin() + static_cast<std::ptrdiff_t>(prefix.size()), v.end(),
                               [](char c) { return c >= '0' && c <= '9'; });
        });
    };
    while (clashes(base))
        base += '\'';
    return base;
}

} // namespace

EquationSystem associated_system(const OrderedAutomaton& a) {
    EquationSystem out;
    std::string base = indeterminate_prefix(a.vars());
    for (std::size_t s = 0; s < a.size(); ++s)
        out.unknowns.push_back(base + std::to_string(s));
    std::vector<Term> leaves;
    leaves.reserve(a.generator_count());
    for (Gen g = 0; g < a.generator_count(); ++g) {
        auto d = a.decode(g);
        if (d.is_var)
            leaves.push_back(Term::var(a.vars()[d.var]));
        else
            leaves.push_back(Term::prefix(a.config().actions[d.action], Term::var(out.unknowns[d.target])));
    }
    for (std::size_t s = 0; s < a.size(); ++s)
        out.rhs.push_back(instantiate(a.theory().represent(a.branch(s)), leaves));
    out.order = a.order();
    return out;
}

void check_system_guarded(const EquationSystem& system) {
    if (system.rhs.size() != system.size() || system.order.size() != system.size())
        throw InputError("equation system is malformed");
    for (std::size_t i = 0; i < system.size(); ++i)
        for (const auto& u : system.unknowns)
            if (!is_guarded(system.rhs[i], u))
                throw InputError("indeterminate '" + u + "' occurs unguarded in the equation for '" +
                                 system.unknowns[i] + "'");
}

void check_monotone(const EquationSystem& system, const TheoryConfig& config) {
    auto var_leq = [&](const std::string& x, const std::string& y) {
        auto i = system.index(x);
        auto j = system.index(y);
        return i && j && system.order.test(*i, *j);
    };
    std::unique_ptr<Calculus> calc;
    for (auto [i, j] : system.order.strict_pairs()) {
        if (syntactic_leq(system.rhs[i], system.rhs[j], config, var_leq))
            continue;
        if (!calc)
            calc = std::make_unique<Calculus>(config);
        auto pair = combine(*calc, system.rhs[i], system.rhs[j]);
        auto& a = pair.automaton;
        Relation vars = Relation::identity(a.vars().size());
        for (std::size_t u = 0; u < a.vars().size(); ++u)
            for (std::size_t w = 0; w < a.vars().size(); ++w)
                if (var_leq(a.vars()[u], a.vars()[w]))
                    vars.set(u, w);
        a.set_var_order(std::move(vars));
        a.set_order(a.order());
        if (!behaviour_preorder(a).test(pair.lhs_root, pair.rhs_root))
            throw InputError("system is not monotone: the equation for '" + system.unknowns[i] +
                             "' is not below the one for '" + system.unknowns[j] + "'");
    }
}

std::vector<Term> solve_guarded(const EquationSystem& system, bool prefer_last) {
    check_system_guarded(system);
    std::vector<std::size_t> remaining(system.size());
    for (std::size_t i = 0; i < system.size(); ++i)
        remaining[i] = i;
    std::vector<Term> rhs = system.rhs;
    std::vector<std::size_t> eliminated;
    std::vector<Term> partial(system.size(), Term::zero());

    while (!remaining.empty()) {
        auto is_minimal = [&](std::size_t x) {
            return std::none_of(remaining.begin(), remaining.end(), [&](std::size_t y) {
                return y != x && system.order.test(y, x) && !system.order.test(x, y);
            });
        };
        auto pick = prefer_last ? std::find_if(remaining.rbegin(), remaining.rend(), is_minimal).base() - 1
                                : std::find_if(remaining.begin(), remaining.end(), is_minimal);
        std::size_t n = *pick;
        remaining.erase(pick);
        const std::string& name = system.unknowns[n];
        // μx e ≡ e when x does not occur in e.
        Term fixed = rhs[n].has_free(name) ? Term::mu(name, rhs[n]) : rhs[n];
        for (std::size_t i : remaining)
            rhs[i] = substitute(rhs[i], fixed, name);
        partial[n] = fixed;
        eliminated.push_back(n);
    }

    // Back-substitution: each eliminated term mentions only indeterminates
    // eliminated after it, whose solutions are already closed.
    std::vector<Term> solution(system.size(), Term::zero());
    for (auto it = eliminated.rbegin(); it != eliminated.rend(); ++it) {
        Term t = partial[*it];
        for (auto later = eliminated.rbegin(); later != it; ++later)
            t = substitute(t, solution[*later], system.unknowns[*later]);
        solution[*it] = std::move(t);
    }
    return solution;
}

Term canonical_term(const OrderedAutomaton& a, std::size_t state) {
    if (state >= a.size())
        throw InputError("state out of range");
    return solve_guarded(associated_system(a)).at(state);
}

bool prove_leq(Calculus& calc, const Term& e, const Term& f) {
    calc.check_term(e);
    calc.check_term(f);
    return behavioural_leq(calc, e, f);
}

std::string_view to_string(Rule rule) {
    switch (rule) {
    case Rule::ie: return "Ie";
    case Rule::s: return "S";
    case Rule::act: return "Act";
    case Rule::r1a: return "R1a";
    case Rule::r1b: return "R1b";
    case Rule::r2a: return "R2a";
    case Rule::r2b: return "R2b";
    case Rule::r3: return "R3";
    case Rule::ufp: return "UFP";
    case Rule::unfold: return "Unfold";
    }
    return "?";
}

namespace {

void require(bool condition, const char* message) {
    if (!condition)
        throw InputError(message);
}

std::vector<Term> pattern_leaves(const Derivation& d) {
    std::vector<Term> leaves{Term::var(d.var)};
    leaves.insert(leaves.end(), d.args.begin(), d.args.end());
    return leaves;
}

void check_pattern(const STerm& pattern, std::size_t leaves) {
    for (Gen g : pattern.generators())
        require(g < leaves, "pattern mentions a generator without an argument");
}

bool args_guard(const Derivation& d) {
    return std::all_of(d.args.begin(), d.args.end(), [&](const Term& f) { return is_guarded(f, d.var); });
}

} // namespace

RuleInstance instantiate_rule(Calculus& calc, const Derivation& d) {
    const Theory& theory = calc.theory();
    RuleInstance out;
    switch (d.rule) {
    case Rule::ie: {
        check_pattern(d.pattern, d.args.size());
        check_pattern(d.pattern_rhs, d.args.size());
        GeneratorContext ctx(d.args.size());
        out.side_conditions =
            element_leq(theory, ctx, normalize(theory, ctx, d.pattern), normalize(theory, ctx, d.pattern_rhs));
        out.conclusion = {instantiate(d.pattern, d.args), instantiate(d.pattern_rhs, d.args)};
        break;
    }
    case Rule::s:
        require(d.args.size() == 2, "rule S needs two arguments");
        require(theory.admits(d.lower_op) && theory.admits(d.upper_op), "operation foreign to the theory");
        require(d.lower_op.arity() == 2 && d.upper_op.arity() == 2, "rule S needs binary operations");
        out.side_conditions = operation_leq(d.lower_op, d.upper_op);
        out.conclusion = {Term::binary(d.lower_op, d.args[0], d.args[1]),
                          Term::binary(d.upper_op, d.args[0], d.args[1])};
        break;
    case Rule::act: {
        auto lo = calc.config().action_index(d.lower_action);
        auto hi = calc.config().action_index(d.upper_action);
        require(lo && hi, "rule Act names an undeclared action");
        out.side_conditions = calc.config().action_preorder().test(*lo, *hi);
        out.conclusion = {Term::prefix(d.lower_action, d.body), Term::prefix(d.upper_action, d.body)};
        break;
    }
    case Rule::r1a: {
        auto leaves = pattern_leaves(d);
        check_pattern(d.pattern, leaves.size());
        GeneratorContext ctx(leaves.size());
        Element resolved = lfp(theory, ctx, 0, normalize(theory, ctx, d.pattern));
        out.side_conditions = args_guard(d);
        out.conclusion = {Term::beta(d.var, instantiate(d.pattern, leaves)),
                          instantiate(theory.represent(resolved), leaves), true};
        break;
    }
    case Rule::r1b: {
        Term fixed = Term::mu(d.var, d.body);
        out.conclusion = {Term::beta(d.var, substitute_guarded(d.body, fixed, d.var)), fixed};
        break;
    }
    case Rule::r2a: {
        auto leaves = pattern_leaves(d);
        check_pattern(d.pattern, leaves.size());
        out.side_conditions = args_guard(d);
        leaves[0] = d.bound;
        out.premises.push_back({instantiate(d.pattern, leaves), d.bound});
        leaves[0] = Term::var(d.var);
        out.conclusion = {Term::beta(d.var, instantiate(d.pattern, leaves)), d.bound};
        break;
    }
    case Rule::r2b:
        out.premises.push_back({Term::beta(d.var, substitute_guarded(d.body, d.bound, d.var)), d.bound});
        out.conclusion = {Term::mu(d.var, d.body), d.bound};
        break;
    case Rule::r3:
        out.premises.push_back({d.bound, Term::beta(d.var, substitute_guarded(d.body, d.bound, d.var))});
        out.conclusion = {d.bound, Term::mu(d.var, d.body)};
        break;
    case Rule::ufp:
        out.side_conditions = is_guarded(d.body, d.var);
        out.premises.push_back({substitute(d.body, d.bound, d.var), d.bound, true});
        out.conclusion = {Term::mu(d.var, d.body), d.bound, true};
        break;
    case Rule::unfold: {
        Term fixed = Term::mu(d.var, d.body);
        out.conclusion = {fixed, substitute(d.body, fixed, d.var), true};
        break;
    }
    }
    for (const auto& j : out.premises) {
        calc.check_term(j.lhs);
        calc.check_term(j.rhs);
    }
    calc.check_term(out.conclusion.lhs);
    calc.check_term(out.conclusion.rhs);
    return out;
}

namespace {

bool holds(Calculus& calc, const Judgement& j) {
    auto pair = combine(calc, j.lhs, j.rhs);
    Relation r = behaviour_preorder(pair.automaton);
    return r.test(pair.lhs_root, pair.rhs_root) && (!j.equation || r.test(pair.rhs_root, pair.lhs_root));
}

} // namespace

bool check_axiom_instance(Calculus& calc, const Derivation& d) {
    RuleInstance inst = instantiate_rule(calc, d);
    if (!inst.side_conditions)
        return false;
    for (const auto& premise : inst.premises)
        if (!holds(calc, premise))
            return true;
    return holds(calc, inst.conclusion);
}

} // namespace opc
