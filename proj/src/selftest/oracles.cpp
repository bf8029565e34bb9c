#include "selftest/oracles.hpp"

#include "opc/errors.hpp"

#include <map>
#include <set>

namespace opc::selftest {

namespace {

Rational mass_on(const ConvexPayload& p, const std::vector<Gen>& set) {
    Rational total = 0;
    for (const auto& [g, w] : p.weights)
        if (std::find(set.begin(), set.end(), g) != set.end())
            total += w;
    return total;
}

} // namespace

bool hh_leq_bruteforce(const Relation& order, const ConvexPayload& lhs, const ConvexPayload& rhs) {
    std::set<Gen> joint;
    for (const auto& [g, w] : lhs.weights)
        joint.insert(g);
    for (const auto& [g, w] : rhs.weights)
        joint.insert(g);
    std::vector<Gen> gens(joint.begin(), joint.end());
    if (gens.size() > 16)
        throw ResourceError("brute-force upset enumeration is limited to 16 generators");
    for (std::uint32_t mask = 0; mask < (1u << gens.size()); ++mask) {
        std::vector<Gen> set;
        for (std::size_t i = 0; i < gens.size(); ++i)
            if (mask >> i & 1)
                set.push_back(gens[i]);
        bool upward = true;
        for (std::size_t i = 0; i < gens.size() && upward; ++i)
            for (std::size_t j = 0; j < gens.size() && upward; ++j)
                if ((mask >> i & 1) && !(mask >> j & 1) && order.test(gens[i], gens[j]))
                    upward = false;
        if (upward && mass_on(lhs, set) > mass_on(rhs, set))
            return false;
    }
    return true;
}

namespace {

void accumulate(const STerm& t, const Rational& scale, std::map<Gen, Rational>& into) {
    if (t.is_leaf()) {
        into[t.generator()] += scale;
        return;
    }
    if (t.op().kind == OpKind::zero)
        return;
    if (t.op().kind != OpKind::convex)
        throw InputError("convex oracle met a non-convex operation");
    accumulate(t.children()[0], scale * t.op().weight, into);
    accumulate(t.children()[1], scale * (1 - t.op().weight), into);
}

/// Follows guards for one atom; convex nodes are resolved by `accumulate`.
void accumulate_at(const STerm& t, std::size_t atom, const Rational& scale, std::map<Gen, Rational>& into) {
    if (t.is_leaf()) {
        into[t.generator()] += scale;
        return;
    }
    switch (t.op().kind) {
    case OpKind::zero: return;
    case OpKind::guard:
        accumulate_at(t.children()[(t.op().test >> atom & 1) ? 0 : 1], atom, scale, into);
        return;
    case OpKind::convex:
        accumulate_at(t.children()[0], atom, scale * t.op().weight, into);
        accumulate_at(t.children()[1], atom, scale * (1 - t.op().weight), into);
        return;
    case OpKind::join: throw InputError("probgkat oracle met a join");
    }
}

ConvexPayload to_payload(const std::map<Gen, Rational>& weights) {
    ConvexPayload out;
    for (const auto& [g, w] : weights)
        if (w != 0)
            out.weights.emplace_back(g, w);
    return out;
}

Gen guarded_at(const STerm& t, std::size_t atom) {
    if (t.is_leaf())
        return t.generator();
    if (t.op().kind == OpKind::zero)
        return no_gen;
    if (t.op().kind != OpKind::guard)
        throw InputError("guarded oracle met a non-guard operation");
    return guarded_at(t.children()[(t.op().test >> atom & 1) ? 0 : 1], atom);
}

} // namespace

Element normalize_oracle(const TheoryConfig& config, const STerm& t) {
    switch (config.theory) {
    case TheoryKind::guarded: {
        GuardedPayload out;
        for (std::size_t a = 0; a < config.atoms.size(); ++a)
            out.table.push_back(guarded_at(t, a));
        return out;
    }
    case TheoryKind::convex: {
        std::map<Gen, Rational> weights;
        accumulate(t, Rational(1), weights);
        return to_payload(weights);
    }
    case TheoryKind::semilattice: {
        std::vector<Gen> gens = t.generators();
        return SemilatticePayload{gens};
    }
    case TheoryKind::probgkat: {
        ProbGkatPayload out;
        for (std::size_t a = 0; a < config.atoms.size(); ++a) {
            std::map<Gen, Rational> weights;
            accumulate_at(t, a, Rational(1), weights);
            out.table.push_back(to_payload(weights));
        }
        return out;
    }
    }
    throw InputError("unknown theory");
}

namespace {

/// Mass sent by a subdistribution to the variable `var`, or to the
/// R-class of `target` under `action`.
Rational class_mass(const OrderedAutomaton& a, const Relation& r, const ConvexPayload& p, bool is_var,
                    std::size_t var, std::size_t action, std::size_t target) {
    Rational total = 0;
    for (const auto& [g, w] : p.weights) {
        auto d = a.decode(g);
        if (is_var ? (d.is_var && d.var == var) : (!d.is_var && d.action == action && r.test(target, d.target)))
            total += w;
    }
    return total;
}

bool same_class_masses(const OrderedAutomaton& a, const Relation& r, const ConvexPayload& p,
                       const ConvexPayload& q) {
    for (std::size_t v = 0; v < a.vars().size(); ++v)
        if (class_mass(a, r, p, true, v, 0, 0) != class_mass(a, r, q, true, v, 0, 0))
            return false;
    for (std::size_t act = 0; act < a.config().actions.size(); ++act)
        for (std::size_t t = 0; t < a.size(); ++t)
            if (class_mass(a, r, p, false, 0, act, t) != class_mass(a, r, q, false, 0, act, t))
                return false;
    return true;
}

bool same_gen(const OrderedAutomaton& a, const Relation& r, Gen g, Gen h) {
    if (g == no_gen || h == no_gen)
        return g == h;
    auto dg = a.decode(g);
    auto dh = a.decode(h);
    if (dg.is_var || dh.is_var)
        return dg.is_var && dh.is_var && dg.var == dh.var;
    return dg.action == dh.action && r.test(dg.target, dh.target);
}

bool covers(const OrderedAutomaton& a, const Relation& r, const std::vector<Gen>& p, const std::vector<Gen>& q) {
    for (Gen g : p) {
        bool found = false;
        for (Gen h : q)
            found = found || same_gen(a, r, g, h);
        if (!found)
            return false;
    }
    return true;
}

bool bisimilar_step(const OrderedAutomaton& a, const Relation& r, std::size_t x, std::size_t y) {
    const Element& p = a.branch(x);
    const Element& q = a.branch(y);
    switch (a.theory().kind()) {
    case TheoryKind::guarded: {
        const auto& tp = std::get<GuardedPayload>(p).table;
        const auto& tq = std::get<GuardedPayload>(q).table;
        for (std::size_t i = 0; i < tp.size(); ++i)
            if (!same_gen(a, r, tp[i], tq[i]))
                return false;
        return true;
    }
    case TheoryKind::convex:
        return same_class_masses(a, r, std::get<ConvexPayload>(p), std::get<ConvexPayload>(q));
    case TheoryKind::semilattice: {
        const auto& sp = std::get<SemilatticePayload>(p).maxima;
        const auto& sq = std::get<SemilatticePayload>(q).maxima;
        return covers(a, r, sp, sq) && covers(a, r, sq, sp);
    }
    case TheoryKind::probgkat: {
        const auto& tp = std::get<ProbGkatPayload>(p).table;
        const auto& tq = std::get<ProbGkatPayload>(q).table;
        for (std::size_t i = 0; i < tp.size(); ++i)
            if (!same_class_masses(a, r, tp[i], tq[i]))
                return false;
        return true;
    }
    }
    return false;
}

} // namespace

Relation naive_bisimulation(const OrderedAutomaton& a) {
    Relation r = Relation::total(a.size());
    while (true) {
        Relation next(a.size());
        for (std::size_t x = 0; x < a.size(); ++x)
            for (std::size_t y = 0; y < a.size(); ++y)
                if (r.test(x, y) && bisimilar_step(a, r, x, y))
                    next.set(x, y);
        if (next == r)
            return r;
        r = std::move(next);
    }
}

Relation naive_lts_simulation(const OrderedAutomaton& a) {
    if (a.theory().kind() != TheoryKind::semilattice)
        throw InputError("transition-system simulation needs a semilattice automaton");
    Relation r = Relation::total(a.size());
    auto simulated = [&](std::size_t x, std::size_t y) {
        const auto& lhs = std::get<SemilatticePayload>(a.branch(x)).maxima;
        const auto& rhs = std::get<SemilatticePayload>(a.branch(y)).maxima;
        for (Gen g : lhs) {
            auto dg = a.decode(g);
            bool matched = false;
            for (Gen h : rhs) {
                auto dh = a.decode(h);
                if (dg.is_var && dh.is_var)
                    matched = matched || a.var_order().test(dg.var, dh.var);
                else if (!dg.is_var && !dh.is_var)
                    matched = matched || (a.action_order().test(dg.action, dh.action) && r.test(dg.target, dh.target));
            }
            if (!matched)
                return false;
        }
        return true;
    };
    while (true) {
        Relation next(a.size());
        for (std::size_t x = 0; x < a.size(); ++x)
            for (std::size_t y = 0; y < a.size(); ++y)
                if (r.test(x, y) && simulated(x, y))
                    next.set(x, y);
        if (next == r)
            return r;
        r = std::move(next);
    }
}

} // namespace opc::selftest
