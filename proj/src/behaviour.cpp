#include "opc/behaviour.hpp"

#include "opc/errors.hpp"

#include <map>

namespace opc {

bool lifted_leq(const OrderedAutomaton& a, const Relation& states, const Element& p, const Element& q) {
    if (states.size() != a.size())
        throw InputError("state relation does not match the automaton");
    BranchOrder ord(a, states);
    return a.theory().leq(ord, p, q);
}

Relation behaviour_preorder(const OrderedAutomaton& a, std::size_t* rounds) {
    Relation current = Relation::total(a.size());
    std::size_t count = 0;
    while (true) {
        ++count;
        Relation next(a.size());
        for (std::size_t x = 0; x < a.size(); ++x)
            for (std::size_t y = 0; y < a.size(); ++y)
                if (current.test(x, y) && lifted_leq(a, current, a.branch(x), a.branch(y)))
                    next.set(x, y);
        if (next == current)
            break;
        current = std::move(next);
    }
    if (rounds)
        *rounds = count;
    return current;
}

Relation similarity(const OrderedAutomaton& a) {
    const Relation& declared = a.order();
    Relation current = Relation::total(a.size());
    while (true) {
        Relation composite = declared.compose(current).compose(declared);
        auto admissible = [&](Gen g, Gen h) {
            auto dg = a.decode(g);
            auto dh = a.decode(h);
            if (dg.is_var != dh.is_var)
                return false;
            if (dg.is_var)
                return a.var_order().test(dg.var, dh.var);
            return a.action_order().test(dg.action, dh.action) && composite.test(dg.target, dh.target);
        };
        Relation next(a.size());
        for (std::size_t x = 0; x < a.size(); ++x)
            for (std::size_t y = 0; y < a.size(); ++y)
                if (current.test(x, y) && a.theory().coupling_exists(a.branch(x), a.branch(y), admissible))
                    next.set(x, y);
        if (next == current)
            return current;
        current = std::move(next);
    }
}

Relation ordinary_bisimilarity(const OrderedAutomaton& a) {
    if (!a.order().is_discrete())
        throw InputError("ordinary bisimilarity needs a discretely ordered automaton");
    std::vector<std::size_t> block(a.size(), 0);
    std::size_t blocks = a.size() == 0 ? 0 : 1;
    DiscreteOrder discrete;
    while (true) {
        std::map<std::pair<std::size_t, Element>, std::size_t> signatures;
        std::vector<std::size_t> next(a.size());
        for (std::size_t s = 0; s < a.size(); ++s) {
            Element quotient = a.theory().rename(discrete, a.branch(s), [&](Gen g) -> Gen {
                auto d = a.decode(g);
                if (d.is_var)
                    return g;
                return static_cast<Gen>(a.vars().size() + d.action * a.size() + block[d.target]);
            });
            auto key = std::make_pair(block[s], std::move(quotient));
            next[s] = signatures.try_emplace(std::move(key), signatures.size()).first->second;
        }
        block = std::move(next);
        if (signatures.size() == blocks)
            break;
        blocks = signatures.size();
    }
    Relation out(a.size());
    for (std::size_t x = 0; x < a.size(); ++x)
        for (std::size_t y = 0; y < a.size(); ++y)
            if (block[x] == block[y])
                out.set(x, y);
    return out;
}

bool weak_coupling_exists(const Theory& theory, const GeneratorContext& ctx, std::span<const Gen> h,
                          const Element& p, const Element& q) {
    if (!theory.well_formed(p) || !theory.well_formed(q))
        throw InputError("elements do not match the theory");
    for (Gen g : h)
        if (!ctx.contains(g))
            throw InputError("generator map leaves the target context");
    for (const Element* e : {&p, &q})
        for (Gen g : theory.support(*e))
            if (g >= h.size())
                throw InputError("element mentions a generator outside the map's domain");
    return theory.coupling_exists(p, q, [&](Gen u, Gen v) { return ctx.leq(h[u], h[v]); });
}

TermPair combine(Calculus& calc, const Term& e, const Term& f) {
    OrderedAutomaton lhs = calc.reachable(e);
    OrderedAutomaton rhs = calc.reachable(f);
    std::size_t offset = lhs.size();
    return TermPair{disjoint_union(lhs, rhs), 0, offset};
}

bool behavioural_leq(Calculus& calc, const Term& e, const Term& f) {
    auto pair = combine(calc, e, f);
    return behaviour_preorder(pair.automaton).test(pair.lhs_root, pair.rhs_root);
}

bool behavioural_equiv(Calculus& calc, const Term& e, const Term& f) {
    auto pair = combine(calc, e, f);
    Relation r = behaviour_preorder(pair.automaton);
    return r.test(pair.lhs_root, pair.rhs_root) && r.test(pair.rhs_root, pair.lhs_root);
}

bool simulated_by(Calculus& calc, const Term& e, const Term& f) {
    auto pair = combine(calc, e, f);
    return similarity(pair.automaton).test(pair.lhs_root, pair.rhs_root);
}

bool bisimilar(Calculus& calc, const Term& e, const Term& f) {
    auto pair = combine(calc, e, f);
    return ordinary_bisimilarity(pair.automaton).test(pair.lhs_root, pair.rhs_root);
}

} // namespace opc
