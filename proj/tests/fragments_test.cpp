#include "opc/behaviour.hpp"
#include "opc/errors.hpp"
#include "opc/fragments.hpp"
#include "opc/solver.hpp"
#include "opc/syntax.hpp"
#include "selftest/random.hpp"

#include <doctest.h>

using namespace opc;

namespace {

Rational q(long n, long d) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

TheoryConfig vocabulary(TheoryKind kind) {
    TheoryConfig c = selftest::small_config(kind);
    c.seal();
    return c;
}

Expr parse(std::string_view text, const TheoryConfig& config) {
    TheoryConfig copy = config;
    return parse_expr(text, copy);
}

Term translated(std::string_view text, const TheoryConfig& config) { return translate(parse(text, config), config); }

/// Behavioural order between two expressions through their translations.
bool expr_leq(Calculus& calc, const Expr& e, const Expr& f) {
    return prove_leq(calc, translate(e, calc.config()), translate(f, calc.config()));
}

bool expr_equiv(Calculus& calc, const Expr& e, const Expr& f) { return expr_leq(calc, e, f) && expr_leq(calc, f, e); }

/// Replaces leaf i of `p` by leaves[i].
STerm plug(const STerm& p, const std::vector<STerm>& leaves) {
    if (p.is_leaf())
        return leaves.at(p.generator());
    if (p.op().kind == OpKind::zero)
        return STerm::zero();
    return STerm::node(p.op(), plug(p.children()[0], leaves), plug(p.children()[1], leaves));
}

/// p(e, 1) for a loop pattern p.
Expr apply_pattern(const STerm& p, const Expr& x, const Expr& y) {
    if (p.is_leaf())
        return p.generator() == loop_body_gen ? x : y;
    if (p.op().kind == OpKind::zero)
        return Expr::zero();
    return Expr::choice(p.op(), apply_pattern(p.children()[0], x, y), apply_pattern(p.children()[1], x, y));
}

const std::vector<TheoryKind> all_kinds{TheoryKind::guarded, TheoryKind::convex, TheoryKind::semilattice,
                                        TheoryKind::probgkat};

} // namespace

TEST_CASE("star translation clauses") {
    TheoryConfig c = vocabulary(TheoryKind::semilattice);
    CHECK(format_term(translate_star(parse("a", c)), c) == "a._u");
    CHECK(format_term(translate_star(parse("1", c)), c) == "_u");
    CHECK(format_term(translate_star(parse("0", c)), c) == "0");
    CHECK(format_term(translate_star(parse("a;d", c)), c) == "a.d._u");
    CHECK(format_term(translate_star(parse("a*{+}", c)), c) == "mu _v1. a._v1 + _u");
    CHECK_THROWS_AS(translate_star(parse("a*{x + y}", c)), InputError);
}

TEST_CASE("star loops are polystar loops with p(x, y) = x op y") {
    TheoryConfig c = vocabulary(TheoryKind::convex);
    Expr star = parse("a*{+[1/3]}", c);
    Expr poly = parse("a*{x +[1/3] y}", c);
    CHECK(star.payload().star);
    CHECK_FALSE(poly.payload().star);
    CHECK(translate_star(star) == translate_polystar(poly));
}

TEST_CASE("unit laws hold behaviourally") {
    selftest::Rng rng(71);
    for (auto kind : all_kinds) {
        TheoryConfig c = vocabulary(kind);
        Calculus calc(c);
        for (int i = 0; i < 60; ++i) {
            Expr e = selftest::random_expr(rng, c, 6, false, false);
            CHECK(expr_equiv(calc, Expr::seq(Expr::one(), e), e));
            CHECK(expr_equiv(calc, Expr::seq(e, Expr::one()), e));
            CHECK(expr_equiv(calc, Expr::seq(Expr::zero(), e), Expr::zero()));
            CHECK(expr_leq(calc, Expr::zero(), e));
        }
    }
}

TEST_CASE("sequencing is associative") {
    selftest::Rng rng(72);
    for (auto kind : all_kinds) {
        TheoryConfig c = vocabulary(kind);
        Calculus calc(c);
        for (int i = 0; i < 40; ++i) {
            Expr e1 = selftest::random_expr(rng, c, 4, false, false);
            Expr e2 = selftest::random_expr(rng, c, 4, false, false);
            Expr e3 = selftest::random_expr(rng, c, 4, false, false);
            CHECK(expr_equiv(calc, Expr::seq(e1, Expr::seq(e2, e3)), Expr::seq(Expr::seq(e1, e2), e3)));
        }
    }
}

TEST_CASE("a loop that always exits behaves like 1") {
    TheoryConfig c = vocabulary(TheoryKind::convex);
    Calculus calc(c);
    CHECK(expr_equiv(calc, parse("(a;d)*{y}", c), Expr::one()));
}

TEST_CASE("Bernoulli loop exits with the complementary weight") {
    TheoryConfig c = vocabulary(TheoryKind::convex);
    Calculus calc(c);
    Element p = calc.step(translated("a*{x +[1/3] y}", c));
    CHECK(std::get<ConvexPayload>(p).at(calc.var_gen(std::string(unit_var))) == q(2, 3));
}

TEST_CASE("polystar steps") {
    TheoryConfig c = vocabulary(TheoryKind::convex);
    PolystarCalculus calc(c);
    CHECK(calc.step(Expr::one()) == calc.theory().unit(PolystarCalculus::tick));

    Element seq = calc.step(parse("a;d", c));
    const auto& ab = std::get<ConvexPayload>(seq);
    REQUIRE(ab.weights.size() == 1);
    const auto& info = calc.describe(ab.weights[0].first);
    CHECK(info.kind == PolystarCalculus::GenInfo::Kind::pair);
    CHECK(format_expr(info.target, c) == "1;d");

    // Loop body (a +[1/2] 1) with pattern x +[1/2] y: after conditioning the
    // a-step keeps rs / (1 - r(1 - s)) = 1/3 and the tick takes the rest.
    Element loop_step = calc.step(parse("(a +[1/2] 1)*{x +[1/2] y}", c));
    const auto& loop = std::get<ConvexPayload>(loop_step);
    CHECK(loop.at(PolystarCalculus::tick) == q(2, 3));
    CHECK(loop.mass() == 1);
    REQUIRE(loop.weights.size() == 2);
    for (const auto& [g, w] : loop.weights)
        if (g != PolystarCalculus::tick)
            CHECK(w == q(1, 3));
}

TEST_CASE("polystar semantics agrees with the translated term") {
    selftest::Rng rng(73);
    for (auto kind : all_kinds) {
        TheoryConfig c = vocabulary(kind);
        for (int i = 0; i < 60; ++i) {
            Expr e = selftest::random_expr(rng, c, 6, false, false);
            PolystarCalculus direct(c);
            Calculus calc(c);
            OrderedAutomaton lhs = direct.explore(e);
            OrderedAutomaton rhs = calc.reachable(translate_polystar(e));
            OrderedAutomaton both = disjoint_union(lhs, rhs);
            Relation beh = behaviour_preorder(both);
            CHECK(beh.test(0, lhs.size()));
            CHECK(beh.test(lhs.size(), 0));
        }
    }
}

TEST_CASE("loop payload axioms") {
    selftest::Rng rng(74);
    for (auto kind : all_kinds) {
        TheoryConfig c = vocabulary(kind);
        auto theory = make_theory(c);
        Calculus calc(c);
        for (int i = 0; i < 40; ++i) {
            Expr e = selftest::random_expr(rng, c, 4, false, false);
            STerm p = selftest::random_sterm(rng, c, 2, selftest::pick(rng, 0, 2), 4);
            Expr loop = Expr::loop(e, LoopPayload::poly(p));
            // p(e e^[p], 1) <= e^[p]
            CHECK(expr_leq(calc, apply_pattern(p, Expr::seq(e, loop), Expr::one()), loop));

            // (e +σ 1)^[p] = e^[lfp_v p(x +σ v, y)]
            Operation sigma = selftest::random_operation(rng, c);
            GeneratorContext ctx(3);
            STerm inner = plug(p, {STerm::node(sigma, STerm::leaf(0), STerm::leaf(2)), STerm::leaf(1)});
            STerm rewritten = theory->represent(lfp(*theory, ctx, 2, normalize(*theory, ctx, inner)));
            Expr lhs = Expr::loop(Expr::choice(sigma, e, Expr::one()), LoopPayload::poly(p));
            Expr rhs = Expr::loop(e, LoopPayload::poly(rewritten));
            CHECK(expr_equiv(calc, lhs, rhs));
        }
    }
}

TEST_CASE("loop fixpoint rule") {
    selftest::Rng rng(75);
    int premises_held = 0;
    for (auto kind : all_kinds) {
        TheoryConfig c = vocabulary(kind);
        Calculus calc(c);
        for (int i = 0; i < 60; ++i) {
            Expr e = selftest::random_expr(rng, c, 4, false, false);
            if (!is_guarded_expr(e))
                continue;
            STerm p = selftest::random_sterm(rng, c, 2, selftest::pick(rng, 0, 2), 4);
            Expr loop = Expr::loop(e, LoopPayload::poly(p));
            for (const Expr& g : {loop, apply_pattern(p, Expr::seq(e, loop), Expr::one()), Expr::zero(),
                                  selftest::random_expr(rng, c, 4, false, false)}) {
                if (!expr_leq(calc, g, apply_pattern(p, Expr::seq(e, g), Expr::one())))
                    continue;
                ++premises_held;
                CHECK(expr_leq(calc, g, loop));
            }
        }
    }
    CHECK(premises_held > 100);
}

TEST_CASE("guardedness of expressions") {
    TheoryConfig c = vocabulary(TheoryKind::convex);
    CHECK(is_guarded_expr(parse("a", c)));
    CHECK(is_guarded_expr(parse("a;1", c)));
    CHECK(is_guarded_expr(parse("0", c)));
    CHECK_FALSE(is_guarded_expr(parse("1", c)));
    CHECK_FALSE(is_guarded_expr(parse("a +[1/2] 1", c)));
}

TEST_CASE("probgkat constants") {
    TheoryConfig c = vocabulary(TheoryKind::probgkat);
    Calculus calc(c);
    selftest::Rng rng(76);
    for (int i = 0; i < 50; ++i) {
        Expr e = selftest::random_expr(rng, c, 5, false, true);
        Expr v = Expr::ret("v");
        CHECK(expr_equiv(calc, Expr::seq(v, e), v));
    }
    CHECK(format_term(translated("$v;a", c), c) == "v");

    // A fair coin between a and d, identical at both atoms.
    Element coin = calc.step(translated("a +[1/2] d", c));
    const auto& table = std::get<ProbGkatPayload>(coin).table;
    REQUIRE(table.size() == 2);
    CHECK(table[0] == table[1]);
    CHECK(table[0].weights.size() == 2);
    CHECK(table[0].mass() == 1);

    PolystarCalculus direct(c);
    CHECK(direct.explore(parse("a*{x ?{b} y}", c)).size() == 2);

    TheoryConfig convex = vocabulary(TheoryKind::convex);
    CHECK_THROWS_AS(translate_probgkat(Expr::ret("v"), convex), InputError);
    CHECK_THROWS_AS(translate_polystar(Expr::ret("v")), InputError);
    CHECK_THROWS_AS(translate_probgkat(Expr::ret("_u"), c), InputError);
}

TEST_CASE("probabilistic tightening") {
    TheoryConfig c = vocabulary(TheoryKind::convex);
    Calculus calc(c);
    Expr e = parse("a;d", c);
    Rational r = q(1, 2), s = q(1, 3);
    Expr lhs = Expr::loop(Expr::choice(Operation::convex(s), e, Expr::one()), LoopPayload::star_of(Operation::convex(r)));
    Expr good = Expr::loop(e, LoopPayload::star_of(Operation::convex(r * s / (1 - r * (1 - s)))));
    Expr naive = Expr::loop(e, LoopPayload::star_of(Operation::convex(r * s)));
    CHECK(expr_equiv(calc, lhs, good));
    CHECK_FALSE(expr_equiv(calc, lhs, naive));
}
