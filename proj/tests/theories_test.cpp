#include "opc/errors.hpp"
#include "opc/theories.hpp"
#include "selftest/oracles.hpp"
#include "selftest/random.hpp"

#include <doctest.h>

using namespace opc;

namespace {

Rational q(long n, long d) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

ConvexPayload dist(std::vector<std::pair<Gen, Rational>> w) { return ConvexPayload{std::move(w)}; }

const Gen x = 0, y = 1, v = 2;

GeneratorContext x_below_y() {
    Relation r = Relation::identity(3);
    r.set(x, y);
    return GeneratorContext(r);
}

} // namespace

TEST_CASE("guarded lfp sends the fixed generator to bottom") {
    CHECK(guarded_lfp(x, GuardedPayload{{x, v}}) == GuardedPayload{{no_gen, v}});
    CHECK(guarded_lfp(x, GuardedPayload{{no_gen, no_gen}}) == GuardedPayload{{no_gen, no_gen}});
    CHECK(guarded_lfp(x, GuardedPayload{{y}}) == GuardedPayload{{y}});
}

TEST_CASE("heavier-higher order examples") {
    GeneratorContext discrete(3);
    ConvexPayload half = dist({{x, q(1, 2)}, {y, q(1, 2)}});
    CHECK(convex_hh_leq(discrete, ConvexPayload{}, half));
    CHECK(convex_hh_leq(discrete, half, half));
    CHECK_FALSE(convex_hh_leq(discrete, half, dist({{x, q(1, 3)}, {y, q(1, 2)}})));

    GeneratorContext ordered = x_below_y();
    CHECK(convex_hh_leq(ordered, dist({{x, q(1, 1)}}), dist({{y, q(1, 1)}})));
    CHECK_FALSE(convex_hh_leq(ordered, dist({{y, q(1, 1)}}), dist({{x, q(1, 1)}})));
}

TEST_CASE("heavier-higher order refuses supports past the cap") {
    ConvexPayload wide;
    for (Gen g = 0; g < 6; ++g)
        wide.weights.emplace_back(g, q(1, 6));
    CHECK_THROWS_AS(convex_hh_leq(DiscreteOrder{}, wide, wide, 5), ResourceError);
    CHECK(convex_hh_leq(DiscreteOrder{}, wide, wide, 6));
}

TEST_CASE("heavier-higher order matches the brute-force oracle and is antisymmetric") {
    selftest::Rng rng(21);
    auto convex = make_theory(TheoryKind::convex);
    for (int i = 0; i < 400; ++i) {
        Relation order = selftest::random_partial_order(rng, 4);
        GeneratorContext ctx(order);
        auto a = std::get<ConvexPayload>(selftest::random_element(rng, *convex, ctx, 4, 6));
        auto b = std::get<ConvexPayload>(selftest::random_element(rng, *convex, ctx, 4, 6));
        bool ab = convex_hh_leq(ctx, a, b);
        CHECK(ab == selftest::hh_leq_bruteforce(order, a, b));
        if (ab && convex_hh_leq(ctx, b, a))
            CHECK(a == b);
    }
}

TEST_CASE("rename is monotone for the heavier-higher order") {
    selftest::Rng rng(22);
    auto convex = make_theory(TheoryKind::convex);
    GeneratorContext from(selftest::random_partial_order(rng, 4));
    // Random maps into the two-element chain, keeping only the monotone ones.
    Relation chain(2);
    chain.set(0, 0);
    chain.set(1, 1);
    chain.set(0, 1);
    GeneratorContext to(chain);
    for (int i = 0; i < 200; ++i) {
        std::vector<Gen> h(4);
        bool monotone = true;
        for (auto& g : h)
            g = static_cast<Gen>(selftest::pick(rng, 0, 1));
        for (Gen a = 0; a < 4; ++a)
            for (Gen b = 0; b < 4; ++b)
                if (from.leq(a, b) && !to.leq(h[a], h[b]))
                    monotone = false;
        if (!monotone)
            continue;
        Element p = selftest::random_element(rng, *convex, from, 4, 4);
        Element r = selftest::random_element(rng, *convex, from, 4, 4);
        if (element_leq(*convex, from, p, r))
            CHECK(element_leq(*convex, to, rename(*convex, from, to, h, p), rename(*convex, from, to, h, r)));
    }
}

TEST_CASE("convex lfp conditions on avoiding the generator") {
    CHECK(convex_lfp(x, dist({{x, q(1, 2)}, {y, q(1, 2)}})) == dist({{y, q(1, 1)}}));
    CHECK(convex_lfp(x, dist({{x, q(1, 1)}})) == ConvexPayload{});
    CHECK(convex_lfp(x, dist({{x, q(1, 3)}, {y, q(1, 3)}})) == dist({{y, q(1, 2)}}));
}

TEST_CASE("convex lfp is a least fixed point") {
    selftest::Rng rng(23);
    auto convex = make_theory(TheoryKind::convex);
    DiscreteOrder ord;
    for (int i = 0; i < 300; ++i) {
        auto p = std::get<ConvexPayload>(selftest::random_element(rng, *convex, ord, 3, 6));
        ConvexPayload fixed = convex_lfp(x, p);
        CHECK(fixed.at(x) == 0);
        CHECK(convex->substitute(ord, p, x, fixed) == Element(fixed));
        auto candidate = std::get<ConvexPayload>(selftest::random_element(rng, *convex, ord, 3, 6));
        if (candidate.at(x) == 0 && convex->leq(ord, convex->substitute(ord, p, x, candidate), candidate))
            CHECK(convex->leq(ord, fixed, candidate));
    }
}

TEST_CASE("semilattice order is downset inclusion") {
    GeneratorContext discrete(3);
    CHECK(semilattice_leq(discrete, SemilatticePayload{}, SemilatticePayload{{x}}));
    CHECK(semilattice_leq(discrete, SemilatticePayload{{x}}, SemilatticePayload{{x, y}}));
    CHECK_FALSE(semilattice_leq(discrete, SemilatticePayload{{x, y}}, SemilatticePayload{{x}}));
    GeneratorContext ordered = x_below_y();
    CHECK(semilattice_leq(ordered, SemilatticePayload{{x, y}}, SemilatticePayload{{y}}));
    CHECK(semilattice_canonical(ordered, {y, x, x}) == SemilatticePayload{{y}});
}

TEST_CASE("probgkat lfp works atom by atom") {
    ProbGkatPayload single{{dist({{x, q(1, 2)}, {y, q(1, 2)}})}};
    CHECK(probgkat_lfp(x, single).table[0] == convex_lfp(x, single.table[0]));

    ProbGkatPayload p{{dist({{x, q(1, 2)}, {y, q(1, 2)}}), dist({{y, q(1, 1)}})}};
    ProbGkatPayload expected{{dist({{y, q(1, 1)}}), dist({{y, q(1, 1)}})}};
    CHECK(probgkat_lfp(x, p) == expected);
    ProbGkatPayload absent{{dist({{y, q(1, 3)}}), ConvexPayload{}}};
    CHECK(probgkat_lfp(x, absent) == absent);
}

TEST_CASE("probgkat distribution law holds after normalization") {
    selftest::Rng rng(24);
    auto theory = make_theory(TheoryKind::probgkat, 2);
    DiscreteOrder ord;
    for (int i = 0; i < 100; ++i) {
        Rational r = selftest::random_weight(rng, 6);
        AtomSet b = static_cast<AtomSet>(selftest::pick(rng, 0, 3));
        auto cvx = Operation::convex(r);
        auto grd = Operation::guard(b);
        STerm lhs = STerm::node(cvx, STerm::leaf(0), STerm::node(grd, STerm::leaf(1), STerm::leaf(2)));
        STerm rhs = STerm::node(grd, STerm::node(cvx, STerm::leaf(0), STerm::leaf(1)),
                                STerm::node(cvx, STerm::leaf(0), STerm::leaf(2)));
        CHECK(theory->normalize(ord, lhs) == theory->normalize(ord, rhs));
    }
}

TEST_CASE("transport feasibility") {
    auto all = [](Gen, Gen) { return true; };
    auto none = [](Gen, Gen) { return false; };
    ConvexPayload sx = dist({{x, q(1, 1)}});
    ConvexPayload sy = dist({{y, q(1, 1)}});
    CHECK(transport_feasible(sx, sy, all));
    CHECK_FALSE(transport_feasible(sx, sy, none));
    CHECK(transport_feasible(ConvexPayload{}, ConvexPayload{}, none));
    // Supply 2/3 on x must fit a capacity of 1/2 on y.
    CHECK_FALSE(transport_feasible(dist({{x, q(2, 3)}}), dist({{y, q(1, 2)}}), all));
    CHECK(transport_feasible(dist({{x, q(1, 3)}, {y, q(1, 3)}}), dist({{x, q(1, 3)}, {v, q(1, 3)}}),
                             [](Gen a, Gen b) { return (a == x && b == v) || (a == y && b == x); }));
}
