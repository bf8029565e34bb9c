#include "selftest/suites.hpp"

#include "opc/behaviour.hpp"
#include "opc/errors.hpp"
#include "opc/fragments.hpp"
#include "opc/semantics.hpp"
#include "opc/solver.hpp"
#include "opc/syntax.hpp"
#include "opc/theories.hpp"
#include "selftest/oracles.hpp"
#include "selftest/random.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace opc::selftest {

namespace {

constexpr std::uint64_t default_seed = 0x5eed2024;

const std::vector<TheoryKind> all_theories{TheoryKind::guarded, TheoryKind::convex, TheoryKind::semilattice,
                                           TheoryKind::probgkat};

struct Tally {
    std::size_t cases = 0;
    std::size_t violations = 0;
    std::string detail;

    void check(bool ok, const std::function<std::string()>& describe) {
        ++cases;
        if (ok)
            return;
        if (violations++ == 0)
            detail = describe();
    }
};

TheoryConfig open_config(TheoryKind kind) {
    TheoryConfig config;
    config.theory = kind;
    config.open = true;
    return config;
}

TheoryConfig sealed(TheoryConfig config) {
    config.seal();
    return config;
}

// Example-based suites.

void intro(Tally& t, Rng&) {
    TheoryConfig config = open_config(TheoryKind::convex);
    Term loop_half = parse_term("mu x. (x +[1/2] a.x)", config);
    Term loop = parse_term("mu x. a.x", config);
    Term leak = parse_term("mu x. (0 +[1/2] a.x)", config);
    Calculus calc(config);
    t.check(behavioural_leq(calc, loop_half, loop), [] { return "mu x.(x +[1/2] a.x) <=_b mu x.a.x fails"; });
    t.check(behavioural_leq(calc, loop, loop_half), [] { return "mu x.a.x <=_b mu x.(x +[1/2] a.x) fails"; });
    t.check(!behavioural_equiv(calc, leak, loop), [] { return "mu x.(0 +[1/2] a.x) is equivalent to mu x.a.x"; });
}

void unrolling(Tally& t, Rng&) {
    for (TheoryKind kind : all_theories) {
        TheoryConfig config = open_config(kind);
        Term once = parse_term("mu u. a.u", config);
        Term twice = parse_term("mu u. a.a.u", config);
        Calculus calc(config);
        std::string theory(to_string(kind));
        t.check(behavioural_equiv(calc, once, twice), [&] { return theory + ": mu u.a.u and mu u.a.a.u differ"; });
        t.check(calc.reachable(once).size() == 1, [&] { return theory + ": mu u.a.u has more than one state"; });
        t.check(calc.reachable(twice).size() == 2, [&] { return theory + ": mu u.a.a.u does not have two states"; });
    }
}

void gkat(Tally& t, Rng&) {
    TheoryConfig config;
    config.theory = TheoryKind::guarded;
    config.atoms = {"b", "c"};
    config.actions = {"a"};
    Term e = parse_term("mu u. a.(a.u ?{b} v)", config);
    Calculus calc(config);
    OrderedAutomaton a = calc.reachable(e);
    t.check(a.size() == 2, [&] { return "expected 2 states, got " + std::to_string(a.size()); });
    if (a.size() != 2)
        return;
    Gen to_loop = a.pair_gen(0, 1);
    Gen back = a.pair_gen(0, 0);
    Gen exit = a.var_gen(*a.var_index("v"));
    t.check(a.branch(0) == Element(GuardedPayload{{to_loop, to_loop}}),
            [] { return "root should take a to the guarded state under every atom"; });
    t.check(a.branch(1) == Element(GuardedPayload{{back, exit}}),
            [] { return "guarded state should loop on b and exit to v on not-b"; });
}

void semilattice_separation(Tally& t, Rng&) {
    TheoryConfig config = open_config(TheoryKind::semilattice);
    Term lhs = parse_term("a.0 + a.a.v", config);
    Term rhs = parse_term("a.a.v", config);
    Calculus calc(config);
    t.check(behavioural_equiv(calc, lhs, rhs), [] { return "a.0 + a.a.v and a.a.v are not equivalent"; });
    t.check(!bisimilar(calc, lhs, rhs), [] { return "a.0 + a.a.v and a.a.v are ordinarily bisimilar"; });
}

// Least fixed points.

/// Guarded: fill the ⊥ entries of q. Semilattice: join q with extra elements.
/// Either way the result is a prefixed point of every p with q = lfp_g p.
Element extend_above(Rng& rng, const Theory& theory, const GeneratorOrder& ord, const Element& q,
                     std::size_t gens) {
    Element extra = random_element(rng, theory, ord, gens, 12);
    if (theory.kind() == TheoryKind::guarded) {
        auto out = std::get<GuardedPayload>(q);
        const auto& fill = std::get<GuardedPayload>(extra).table;
        for (std::size_t a = 0; a < out.table.size(); ++a)
            if (out.table[a] == no_gen)
                out.table[a] = fill[a];
        return out;
    }
    std::vector<Element> args{q, extra};
    return theory.apply(ord, Operation::join(), args);
}

/// q + (1 - mass q)·x, which lies above q in the heavier-higher order.
ConvexPayload add_headroom(const ConvexPayload& q, const ConvexPayload& x) {
    Rational room = 1 - q.mass();
    std::map<Gen, Rational> sum;
    for (const auto& [g, w] : q.weights)
        sum[g] += w;
    for (const auto& [g, w] : x.weights)
        sum[g] += room * w;
    ConvexPayload out;
    for (auto& [g, w] : sum)
        if (w != 0)
            out.weights.emplace_back(g, w);
    return out;
}

Element prefixed_candidate(Rng& rng, const Theory& theory, const GeneratorOrder& ord, const Element& q,
                           std::size_t gens) {
    Element extra = random_element(rng, theory, ord, gens, 12);
    switch (theory.kind()) {
    case TheoryKind::convex: return add_headroom(std::get<ConvexPayload>(q), std::get<ConvexPayload>(extra));
    case TheoryKind::probgkat: {
        auto out = std::get<ProbGkatPayload>(q);
        const auto& x = std::get<ProbGkatPayload>(extra).table;
        for (std::size_t a = 0; a < out.table.size(); ++a)
            out.table[a] = add_headroom(out.table[a], x[a]);
        return out;
    }
    default: return extend_above(rng, theory, ord, q, gens);
    }
}

void lfp_suite(Tally& t, Rng& rng) {
    constexpr std::size_t terms_per_theory = 1000;
    constexpr std::size_t samples = 200;
    constexpr std::size_t gens = 4;
    std::size_t prefixed = 0;
    for (TheoryKind kind : all_theories) {
        TheoryConfig config = sealed(small_config(kind));
        auto theory = make_theory(config);
        Relation order = Relation::identity(gens);
        order.set(2, 3);
        GeneratorContext ctx(order);
        std::string name(to_string(kind));
        for (std::size_t i = 0; i < terms_per_theory; ++i) {
            STerm shape = random_sterm(rng, config, gens, pick(rng, 0, 4), 12);
            Element current = normalize(*theory, ctx, shape);
            std::size_t recursion = pick(rng, 1, 2);
            for (Gen g = 0; g < recursion; ++g) {
                Element q = lfp(*theory, ctx, g, current);
                auto support = theory->support(q);
                t.check(std::find(support.begin(), support.end(), g) == support.end(),
                        [&] { return name + ": lfp still mentions its generator"; });
                Element unfolded = theory->substitute(ctx, current, g, q);
                t.check(theory->equivalent(ctx, unfolded, q), [&] { return name + ": lfp is not a fixed point"; });
                for (std::size_t s = 0; s < samples; ++s) {
                    Element r = coin(rng) ? random_element(rng, *theory, ctx, gens, 12)
                                          : prefixed_candidate(rng, *theory, ctx, q, gens);
                    if (!theory->leq(ctx, theory->substitute(ctx, current, g, r), r))
                        continue;
                    ++prefixed;
                    t.check(theory->leq(ctx, q, r), [&] { return name + ": lfp is above a prefixed point"; });
                }
                Element iterate = theory->zero();
                for (std::size_t k = 0; k < 8; ++k) {
                    iterate = theory->substitute(ctx, current, g, iterate);
                    t.check(theory->leq(ctx, iterate, q), [&] { return name + ": a Kleene iterate exceeds the lfp"; });
                }
                current = q;
            }
        }
    }
    t.check(prefixed >= terms_per_theory * all_theories.size(),
            [&] { return "too few prefixed points sampled: " + std::to_string(prefixed); });
}

// Axiom soundness.

Term guarded_in(const Term& f, const std::string& v, const std::string& action) {
    return is_guarded(f, v) ? f : Term::prefix(action, f);
}

Derivation random_derivation(Rng& rng, Calculus& calc, Rule rule) {
    const TheoryConfig& config = calc.config();
    const Theory& theory = calc.theory();
    TermShape shape;
    shape.max_size = 5;
    TermShape closed_shape = shape;
    closed_shape.free_vars = {"w"};
    const std::string& act = config.actions[pick(rng, 0, config.actions.size() - 1)];

    Derivation d;
    d.rule = rule;
    d.var = "v";
    d.body = random_term(rng, config, shape);
    Term fixed = Term::mu(d.var, d.body);
    auto bound_choice = [&] {
        switch (pick(rng, 0, 4)) {
        case 0: return fixed;
        case 1: return substitute(d.body, fixed, d.var);
        case 2: {
            Term extra = random_term(rng, config, closed_shape);
            return Term::binary(random_operation(rng, config), fixed, extra);
        }
        default: return random_term(rng, config, closed_shape);
        }
    };

    switch (rule) {
    case Rule::ie: {
        d.args = {random_term(rng, config, shape), random_term(rng, config, shape)};
        STerm rhs = random_sterm(rng, config, 2, pick(rng, 0, 3), 4);
        GeneratorContext ctx(2);
        switch (pick(rng, 0, 2)) {
        case 0:
            d.pattern = rhs;
            d.pattern_rhs = theory.represent(normalize(theory, ctx, rhs));
            break;
        case 1:
            d.pattern = theory.represent(normalize(theory, ctx, rhs));
            d.pattern_rhs = rhs;
            break;
        default: {
            std::function<STerm(const STerm&)> lower = [&](const STerm& s) -> STerm {
                if (s.is_leaf())
                    return coin(rng, 0.4) ? STerm::zero() : s;
                if (s.op().kind == OpKind::zero)
                    return s;
                return STerm::node(s.op(), lower(s.children()[0]), lower(s.children()[1]));
            };
            d.pattern = lower(rhs);
            d.pattern_rhs = rhs;
        }
        }
        break;
    }
    case Rule::s:
        d.lower_op = random_operation(rng, config);
        d.upper_op = d.lower_op;
        d.args = {random_term(rng, config, shape), random_term(rng, config, shape)};
        break;
    case Rule::act:
        d.lower_action = config.actions[0];
        d.upper_action = config.actions[pick(rng, 0, config.actions.size() - 1)];
        break;
    case Rule::r1a:
    case Rule::r2a: {
        d.args = {guarded_in(random_term(rng, config, shape), d.var, act),
                  guarded_in(random_term(rng, config, shape), d.var, act)};
        d.pattern = random_sterm(rng, config, 3, pick(rng, 0, 3), 4);
        if (rule == Rule::r2a) {
            std::vector<Term> leaves{Term::var(d.var), d.args[0], d.args[1]};
            Term beta = Term::beta(d.var, instantiate(d.pattern, leaves));
            switch (pick(rng, 0, 2)) {
            case 0: d.bound = beta; break;
            case 1: d.bound = Term::binary(random_operation(rng, config), beta, random_term(rng, config, closed_shape)); break;
            default: d.bound = random_term(rng, config, closed_shape);
            }
        }
        break;
    }
    case Rule::r1b:
    case Rule::unfold: break;
    case Rule::r2b:
    case Rule::r3: d.bound = bound_choice(); break;
    case Rule::ufp:
        d.body = guarded_in(d.body, d.var, act);
        d.bound = coin(rng) ? Term::mu(d.var, d.body) : bound_choice();
        break;
    }
    return d;
}

bool judgement_holds(Calculus& calc, const Judgement& j) {
    auto pair = combine(calc, j.lhs, j.rhs);
    Relation r = behaviour_preorder(pair.automaton);
    return r.test(pair.lhs_root, pair.rhs_root) && (!j.equation || r.test(pair.rhs_root, pair.lhs_root));
}

void axioms(Tally& t, Rng& rng) {
    constexpr std::size_t per_rule = 500;
    const std::vector<Rule> rules{Rule::ie, Rule::s, Rule::act, Rule::r1a, Rule::r1b, Rule::r2a,
                                  Rule::r2b, Rule::r3, Rule::ufp, Rule::unfold};
    std::vector<std::unique_ptr<Calculus>> calcs;
    for (TheoryKind kind : all_theories)
        calcs.push_back(std::make_unique<Calculus>(small_config(kind, true)));
    std::size_t premises_held = 0;
    for (Rule rule : rules) {
        std::size_t applied = 0;
        for (std::size_t attempt = 0; applied < per_rule && attempt < 20 * per_rule; ++attempt) {
            Calculus& calc = *calcs[attempt % calcs.size()];
            Derivation d = random_derivation(rng, calc, rule);
            RuleInstance inst = instantiate_rule(calc, d);
            if (!inst.side_conditions)
                continue;
            ++applied;
            bool premises = std::all_of(inst.premises.begin(), inst.premises.end(),
                                        [&](const Judgement& j) { return judgement_holds(calc, j); });
            if (!premises)
                continue;
            if (!inst.premises.empty())
                ++premises_held;
            t.check(judgement_holds(calc, inst.conclusion), [&] {
                return std::string(to_string(rule)) + " in " + std::string(to_string(calc.config().theory)) +
                       ": " + format_term(inst.conclusion.lhs, calc.config()) +
                       (inst.conclusion.equation ? " == " : " <= ") +
                       format_term(inst.conclusion.rhs, calc.config());
            });
        }
        t.check(applied == per_rule, [&] { return std::string(to_string(rule)) + ": too few applicable instances"; });
    }
    t.check(premises_held >= per_rule, [&] { return "premises held too rarely: " + std::to_string(premises_held); });
}

// Completeness round-trip.

void completeness(Tally& t, Rng& rng) {
    constexpr std::size_t per_theory = 300;
    for (TheoryKind kind : all_theories) {
        Calculus calc(small_config(kind, true));
        for (std::size_t i = 0; i < per_theory; ++i) {
            Term e = random_term(rng, calc.config());
            OrderedAutomaton a = calc.reachable(e);
            Term back = canonical_term(a, 0);
            t.check(behavioural_equiv(calc, e, back), [&] {
                return std::string(to_string(kind)) + ": " + format_term(e, calc.config()) + " vs " +
                       format_term(back, calc.config());
            });
        }
    }
}

// Collapse of similarity, behaviour equivalence and bisimilarity.

Relation symmetric_part(const Relation& r) { return r.intersect(r.converse()); }

void check_collapse(Tally& t, const OrderedAutomaton& a) {
    Relation beh = symmetric_part(behaviour_preorder(a));
    Relation sim = symmetric_part(similarity(a));
    Relation bis = ordinary_bisimilarity(a);
    Relation naive = naive_bisimulation(a);
    t.check(beh == sim && sim == bis && bis == naive, [&] {
        std::ostringstream msg;
        msg << to_string(a.theory().kind()) << " automaton with " << a.size()
            << " states: behaviour/similarity/bisimilarity/oracle disagree";
        return msg.str();
    });
}

/// Calls `visit` with every combination of one value per slot.
template <class T>
void for_each_product(const std::vector<T>& values, std::size_t slots, const std::function<void(const std::vector<T>&)>& visit) {
    std::vector<std::size_t> index(slots, 0);
    std::vector<T> current(slots, values.front());
    while (true) {
        visit(current);
        std::size_t k = 0;
        while (k < slots && ++index[k] == values.size()) {
            index[k] = 0;
            current[k] = values[0];
            ++k;
        }
        if (k == slots)
            return;
        current[k] = values[index[k]];
    }
}

void collapse(Tally& t, Rng& rng) {
    TheoryConfig guarded;
    guarded.theory = TheoryKind::guarded;
    guarded.atoms = {"b", "c"};
    guarded.actions = {"a"};
    TheoryConfig convex;
    convex.theory = TheoryKind::convex;
    convex.actions = {"a"};
    const std::vector<std::string> vars{"v"};

    for (std::size_t n = 1; n <= 3; ++n) {
        OrderedAutomaton shape(guarded, vars, n);
        std::vector<Gen> entries{no_gen};
        for (Gen g = 0; g < shape.generator_count(); ++g)
            entries.push_back(g);
        std::vector<Element> branches;
        for_each_product<Gen>(entries, guarded.atoms.size(),
                              [&](const std::vector<Gen>& table) { branches.push_back(GuardedPayload{table}); });
        for_each_product<Element>(branches, n, [&](const std::vector<Element>& choice) {
            OrderedAutomaton a(guarded, vars, n);
            for (std::size_t s = 0; s < n; ++s)
                a.set_branch(s, choice[s]);
            check_collapse(t, a);
        });
    }

    const std::vector<Rational> grid{Rational(0), Rational(1, 2), Rational(1)};
    for (std::size_t n = 1; n <= 3; ++n) {
        OrderedAutomaton shape(convex, vars, n);
        std::vector<Element> branches;
        for_each_product<Rational>(grid, shape.generator_count(), [&](const std::vector<Rational>& weights) {
            Rational total = 0;
            ConvexPayload p;
            for (std::size_t g = 0; g < weights.size(); ++g) {
                total += weights[g];
                if (weights[g] != 0)
                    p.weights.emplace_back(static_cast<Gen>(g), weights[g]);
            }
            if (total <= 1)
                branches.push_back(p);
        });
        for_each_product<Element>(branches, n, [&](const std::vector<Element>& choice) {
            OrderedAutomaton a(convex, vars, n);
            for (std::size_t s = 0; s < n; ++s)
                a.set_branch(s, choice[s]);
            check_collapse(t, a);
        });
    }

    for (std::size_t i = 0; i < 500; ++i) {
        check_collapse(t, random_automaton(rng, guarded, 6, vars));
        check_collapse(t, random_automaton(rng, convex, 6, vars, 4));
    }
}

// Probabilistic tightening.

void tightening(Tally& t, Rng& rng) {
    TheoryConfig config = sealed(small_config(TheoryKind::convex));
    Calculus calc(config);
    for (std::size_t i = 0; i < 200; ++i) {
        Expr e = random_expr(rng, config, 5, true, false);
        Rational r = random_weight(rng, 6);
        Rational s = random_weight(rng, 6);
        if (r * (1 - s) == 1)
            s = Rational(1, 2);
        Rational tight = r * s / (1 - r * (1 - s));
        Expr lhs = Expr::loop(Expr::choice(Operation::convex(s), e, Expr::one()),
                              LoopPayload::star_of(Operation::convex(r)));
        Expr rhs = Expr::loop(e, LoopPayload::star_of(Operation::convex(tight)));
        Term tl = translate_star(lhs);
        Term tr = translate_star(rhs);
        t.check(prove_leq(calc, tl, tr) && prove_leq(calc, tr, tl), [&] {
            return format_expr(lhs, config) + " vs " + format_expr(rhs, config);
        });
    }
}

// Heavier-higher order.

ConvexPayload push_up(Rng& rng, const Relation& order, const ConvexPayload& p) {
    std::map<Gen, Rational> out;
    for (const auto& [g, w] : p.weights) {
        std::vector<Gen> above;
        for (std::size_t h = 0; h < order.size(); ++h)
            if (order.test(g, h))
                above.push_back(static_cast<Gen>(h));
        Gen target = above[pick(rng, 0, above.size() - 1)];
        Rational moved = w * random_weight(rng, 4);
        out[g] += w - moved;
        out[target] += moved;
    }
    ConvexPayload base;
    for (auto& [g, w] : out)
        if (w != 0)
            base.weights.emplace_back(g, w);
    if (coin(rng)) {
        std::vector<Gen> all(order.size());
        std::iota(all.begin(), all.end(), Gen(0));
        return add_headroom(base, random_subdistribution(rng, all, 2, 4));
    }
    return base;
}

void heavier_higher(Tally& t, Rng& rng) {
    constexpr std::size_t gens = 4;
    std::vector<Gen> all(gens);
    std::iota(all.begin(), all.end(), Gen(0));
    std::size_t related = 0;
    auto hh = [&](const Relation& order, const ConvexPayload& p, const ConvexPayload& q) {
        GeneratorContext ctx(order);
        bool fast = convex_hh_leq(ctx, p, q);
        t.check(fast == hh_leq_bruteforce(order, p, q), [] { return "upset search disagrees with brute force"; });
        return fast;
    };
    for (std::size_t i = 0; i < 1000; ++i) {
        Relation order = random_partial_order(rng, gens);
        ConvexPayload p = random_subdistribution(rng, all, 4, 12);
        ConvexPayload q = coin(rng, 0.7) ? push_up(rng, order, p) : random_subdistribution(rng, all, 4, 12);
        if (coin(rng, 0.2))
            q = p;
        if (hh(order, p, q) && hh(order, q, p)) {
            ++related;
            t.check(p == q, [] { return "antisymmetry fails"; });
        }
    }
    for (std::size_t i = 0; i < 1000; ++i) {
        Relation order = random_partial_order(rng, gens);
        ConvexPayload p = random_subdistribution(rng, all, 4, 12);
        ConvexPayload q = coin(rng, 0.8) ? push_up(rng, order, p) : random_subdistribution(rng, all, 4, 12);
        ConvexPayload r = coin(rng, 0.8) ? push_up(rng, order, q) : random_subdistribution(rng, all, 4, 12);
        if (hh(order, p, q) && hh(order, q, r)) {
            ++related;
            t.check(hh(order, p, r), [] { return "transitivity fails"; });
        }
    }
    t.check(related >= 500, [&] { return "too few related samples: " + std::to_string(related); });
}

// Parser round-trip.

void parser(Tally& t, Rng& rng) {
    constexpr std::size_t per_grammar = 1000;
    for (std::size_t i = 0; i < per_grammar; ++i) {
        TheoryConfig config = sealed(small_config(all_theories[i % all_theories.size()]));
        TermShape shape;
        shape.max_size = 12;
        Term e = random_term(rng, config, shape);
        std::string text = format_term(e, config);
        TheoryConfig copy = config;
        Term back = parse_term(text, copy);
        t.check(back == e && format_term(back, config) == text, [&] { return "term: " + text; });
    }
    for (std::size_t i = 0; i < per_grammar; ++i) {
        TheoryKind kind = all_theories[i % all_theories.size()];
        TheoryConfig config = sealed(small_config(kind));
        Expr e = random_expr(rng, config, 10, false, kind == TheoryKind::probgkat);
        std::string text = format_expr(e, config);
        TheoryConfig copy = config;
        Expr back = parse_expr(text, copy);
        t.check(back == e && format_expr(back, config) == text, [&] { return "expr: " + text; });
    }
    for (std::size_t i = 0; i < per_grammar; ++i) {
        TheoryConfig config = sealed(small_config(all_theories[i % all_theories.size()]));
        EquationSystem s = random_system(rng, config, pick(rng, 1, 4));
        std::string text = format_system(s, config);
        TheoryConfig copy = config;
        EquationSystem back = parse_system(text, copy);
        t.check(back.unknowns == s.unknowns && back.rhs == s.rhs && back.order == s.order &&
                    format_system(back, config) == text,
                [&] { return "system: " + text; });
    }
}

struct SuiteDef {
    std::string name;
    double limit_seconds;
    std::function<void(Tally&, Rng&)> body;
};

const std::vector<SuiteDef>& suites() {
    static const std::vector<SuiteDef> defs{
        {"intro", 1, intro},
        {"unrolling", 1, unrolling},
        {"gkat", 1, gkat},
        {"semilattice-separation", 1, semilattice_separation},
        {"lfp", 60, lfp_suite},
        {"axioms", 120, axioms},
        {"completeness", 120, completeness},
        {"collapse", 120, collapse},
        {"tightening", 60, tightening},
        {"heavier-higher", 30, heavier_higher},
        {"parser", 30, parser},
    };
    return defs;
}

} // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& s : suites())
            out.push_back(s.name);
        return out;
    }();
    return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
    auto it = std::find_if(suites().begin(), suites().end(), [&](const SuiteDef& s) { return s.name == name; });
    if (it == suites().end())
        throw std::invalid_argument("unknown suite '" + name + "'");
    Rng rng(seed ^ std::hash<std::string>{}(name));
    Tally tally;
    auto start = std::chrono::steady_clock::now();
    try {
        it->body(tally, rng);
    } catch (const Error& e) {
        ++tally.violations;
        tally.detail = std::string("unexpected error: ") + e.what();
    }
    SuiteResult out;
    out.name = name;
    out.cases = tally.cases;
    out.violations = tally.violations;
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.limit_seconds = it->limit_seconds;
    out.detail = tally.detail;
    return out;
}

std::uint64_t seed_from_env() {
    const char* env = std::getenv("OPC_SEED");
    if (env == nullptr || *env == '\0')
        return default_seed;
    try {
        return std::stoull(env, nullptr, 0);
    } catch (const std::exception&) {
        throw InputError("OPC_SEED must be an integer");
    }
}

std::string format_result(const SuiteResult& r) {
    std::ostringstream out;
    out << (r.passed() ? "PASS " : "FAIL ") << r.name << ": " << r.cases << " checks, " << r.violations
        << " violations, " << std::fixed << std::setprecision(2) << r.seconds << " s (limit "
        << std::setprecision(0) << r.limit_seconds << " s)";
    if (!r.detail.empty())
        out << "; " << r.detail;
    return out.str();
}

} // namespace opc::selftest
