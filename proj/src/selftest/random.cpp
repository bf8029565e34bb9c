#include "selftest/random.hpp"

#include "opc/theories.hpp"

#include <algorithm>
#include <numeric>

namespace opc::selftest {

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Rational random_weight(Rng& rng, std::size_t max_den) {
    std::size_t den = pick(rng, 1, max_den);
    Rational r(static_cast<unsigned long>(pick(rng, 0, den)), static_cast<unsigned long>(den));
    r.canonicalize();
    return r;
}

TheoryConfig small_config(TheoryKind kind, bool ordered_actions) {
    TheoryConfig config;
    config.theory = kind;
    if (uses_atoms(kind))
        config.atoms = {"b", "c"};
    config.actions = {"a", "d"};
    if (ordered_actions)
        config.action_order = {{"a", "d"}};
    return config;
}

Operation random_operation(Rng& rng, const TheoryConfig& config, std::size_t max_den) {
    auto guard = [&] {
        AtomSet full = config.atoms.size() >= 64 ? ~AtomSet(0) : (AtomSet(1) << config.atoms.size()) - 1;
        return Operation::guard(static_cast<AtomSet>(rng()) & full);
    };
    switch (config.theory) {
    case TheoryKind::guarded: return guard();
    case TheoryKind::convex: return Operation::convex(random_weight(rng, max_den));
    case TheoryKind::semilattice: return Operation::join();
    case TheoryKind::probgkat: return coin(rng) ? guard() : Operation::convex(random_weight(rng, max_den));
    }
    return Operation::zero();
}

ConvexPayload random_subdistribution(Rng& rng, const std::vector<Gen>& gens, std::size_t support,
                                     std::size_t max_den) {
    std::vector<Gen> chosen = gens;
    std::shuffle(chosen.begin(), chosen.end(), rng);
    chosen.resize(std::min(chosen.size(), pick(rng, 0, support)));
    std::sort(chosen.begin(), chosen.end());
    std::size_t den = pick(rng, 1, max_den);
    std::size_t remaining = den;
    ConvexPayload out;
    for (Gen g : chosen) {
        std::size_t n = pick(rng, 0, remaining);
        remaining -= n;
        if (n == 0)
            continue;
        Rational w(static_cast<unsigned long>(n), static_cast<unsigned long>(den));
        w.canonicalize();
        out.weights.emplace_back(g, std::move(w));
    }
    return out;
}

Element random_element(Rng& rng, const Theory& theory, const GeneratorOrder& ord, std::size_t gens,
                       std::size_t max_den) {
    std::vector<Gen> all(gens);
    std::iota(all.begin(), all.end(), Gen(0));
    auto random_gen = [&] { return static_cast<Gen>(pick(rng, 0, gens - 1)); };
    switch (theory.kind()) {
    case TheoryKind::guarded: {
        GuardedPayload out;
        for (std::size_t a = 0; a < theory.atom_count(); ++a)
            out.table.push_back(gens == 0 || coin(rng, 1.0 / 3) ? no_gen : random_gen());
        return out;
    }
    case TheoryKind::convex: return random_subdistribution(rng, all, 4, max_den);
    case TheoryKind::semilattice: {
        std::vector<Gen> chosen;
        for (std::size_t k = pick(rng, 0, std::min<std::size_t>(gens, 3)); k > 0; --k)
            chosen.push_back(random_gen());
        return semilattice_canonical(ord, std::move(chosen));
    }
    case TheoryKind::probgkat: {
        ProbGkatPayload out;
        for (std::size_t a = 0; a < theory.atom_count(); ++a)
            out.table.push_back(random_subdistribution(rng, all, 3, max_den));
        return out;
    }
    }
    return theory.zero();
}

STerm random_sterm(Rng& rng, const TheoryConfig& config, std::size_t gens, std::size_t ops, std::size_t max_den) {
    if (ops == 0 || coin(rng, 0.25)) {
        if (coin(rng, 0.1))
            return STerm::zero();
        return STerm::leaf(static_cast<Gen>(pick(rng, 0, gens - 1)));
    }
    std::size_t left = pick(rng, 0, ops - 1);
    Operation op = random_operation(rng, config, max_den);
    STerm lhs = random_sterm(rng, config, gens, left, max_den);
    return STerm::node(std::move(op), std::move(lhs), random_sterm(rng, config, gens, ops - 1 - left, max_den));
}

Relation random_partial_order(Rng& rng, std::size_t n) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t(0));
    std::shuffle(perm.begin(), perm.end(), rng);
    Relation r = Relation::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (coin(rng, 0.3))
                r.set(perm[i], perm[j]);
    r.close_preorder();
    return r;
}

namespace {

class TermGen {
public:
    TermGen(Rng& rng, const TheoryConfig& config, const TermShape& shape)
        : rng_(rng), config_(config), shape_(shape) {}

    Term run(std::size_t budget, std::vector<std::string>& scope) {
        if (budget <= 1)
            return leaf(scope);
        // Weighted choice: prefixes and operations twice as likely as binders.
        std::vector<int> kinds;
        if (!config_.actions.empty())
            kinds.insert(kinds.end(), {1, 1});
        if (budget >= 3)
            kinds.insert(kinds.end(), {2, 2});
        if (shape_.binders_allowed && !shape_.binders.empty())
            kinds.push_back(3);
        if (kinds.empty())
            return leaf(scope);
        switch (kinds[pick(rng_, 0, kinds.size() - 1)]) {
        case 1: {
            const auto& a = config_.actions[pick(rng_, 0, config_.actions.size() - 1)];
            return Term::prefix(a, run(budget - 1, scope));
        }
        case 2: {
            std::size_t left = pick(rng_, 1, budget - 2);
            Term lhs = run(left, scope);
            Term rhs = run(budget - 1 - left, scope);
            return Term::binary(random_operation(rng_, config_), std::move(lhs), std::move(rhs));
        }
        default: {
            const auto& v = shape_.binders[pick(rng_, 0, shape_.binders.size() - 1)];
            scope.push_back(v);
            Term body = run(budget - 1, scope);
            scope.pop_back();
            return coin(rng_) ? Term::mu(v, std::move(body)) : Term::beta(v, std::move(body));
        }
        }
    }

private:
    Term leaf(const std::vector<std::string>& scope) {
        std::vector<std::string> names = shape_.free_vars;
        names.insert(names.end(), scope.begin(), scope.end());
        names.insert(names.end(), scope.begin(), scope.end());
        if (names.empty() || coin(rng_, 0.2))
            return Term::zero();
        return Term::var(names[pick(rng_, 0, names.size() - 1)]);
    }

    Rng& rng_;
    const TheoryConfig& config_;
    const TermShape& shape_;
};

class ExprGen {
public:
    ExprGen(Rng& rng, const TheoryConfig& config, bool star_only, bool constants)
        : rng_(rng), config_(config), star_only_(star_only), constants_(constants) {}

    Expr run(std::size_t budget) {
        if (budget <= 1)
            return leaf();
        std::vector<int> kinds{0, 1};
        if (budget >= 3)
            kinds.insert(kinds.end(), {2, 3});
        switch (kinds[pick(rng_, 0, kinds.size() - 1)]) {
        case 1: return Expr::loop(run(budget - 1), payload());
        case 2: {
            std::size_t left = pick(rng_, 1, budget - 2);
            Expr lhs = run(left);
            return Expr::choice(random_operation(rng_, config_), std::move(lhs), run(budget - 1 - left));
        }
        case 3: {
            std::size_t left = pick(rng_, 1, budget - 2);
            Expr lhs = run(left);
            return Expr::seq(std::move(lhs), run(budget - 1 - left));
        }
        default: return leaf();
        }
    }

private:
    LoopPayload payload() {
        if (star_only_ || coin(rng_))
            return LoopPayload::star_of(random_operation(rng_, config_));
        return LoopPayload::poly(random_sterm(rng_, config_, 2, pick(rng_, 0, 2), 4));
    }

    Expr leaf() {
        std::size_t k = pick(rng_, 0, constants_ ? 4 : 3);
        switch (k) {
        case 0: return Expr::zero();
        case 1: return Expr::one();
        case 4: return Expr::ret(coin(rng_) ? "v" : "w");
        default: return Expr::action(config_.actions[pick(rng_, 0, config_.actions.size() - 1)]);
        }
    }

    Rng& rng_;
    const TheoryConfig& config_;
    bool star_only_;
    bool constants_;
};

} // namespace

Term random_term(Rng& rng, const TheoryConfig& config, const TermShape& shape) {
    std::vector<std::string> scope;
    return TermGen(rng, config, shape).run(pick(rng, (shape.max_size + 1) / 2, shape.max_size), scope);
}

Expr random_expr(Rng& rng, const TheoryConfig& config, std::size_t max_size, bool star_only, bool constants) {
    return ExprGen(rng, config, star_only, constants).run(pick(rng, (max_size + 1) / 2, max_size));
}

EquationSystem random_system(Rng& rng, const TheoryConfig& config, std::size_t unknowns) {
    EquationSystem out;
    for (std::size_t i = 0; i < unknowns; ++i)
        out.unknowns.push_back("x" + std::to_string(i));
    TermShape inner;
    inner.free_vars = out.unknowns;
    inner.free_vars.push_back("v");
    inner.max_size = 3;
    for (std::size_t i = 0; i < unknowns; ++i) {
        std::size_t leaves = pick(rng, 1, 3);
        std::vector<Term> parts;
        for (std::size_t k = 0; k < leaves; ++k) {
            if (coin(rng, 0.2)) {
                parts.push_back(coin(rng) ? Term::var("v") : Term::zero());
                continue;
            }
            const auto& a = config.actions[pick(rng, 0, config.actions.size() - 1)];
            parts.push_back(Term::prefix(a, random_term(rng, config, inner)));
        }
        STerm shape = random_sterm(rng, config, leaves, leaves - 1);
        out.rhs.push_back(instantiate(shape, parts));
    }
    out.order = random_partial_order(rng, unknowns);
    return out;
}

OrderedAutomaton random_automaton(Rng& rng, const TheoryConfig& config, std::size_t states,
                                  const std::vector<std::string>& vars, std::size_t max_den) {
    OrderedAutomaton out(config, vars, states);
    DiscreteOrder discrete;
    for (std::size_t s = 0; s < states; ++s)
        out.set_branch(s, random_element(rng, out.theory(), discrete, out.generator_count(), max_den));
    return out;
}

} // namespace opc::selftest
