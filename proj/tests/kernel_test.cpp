#include "opc/errors.hpp"
#include "opc/kernel.hpp"
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

const Gen x = 0, y = 1, z = 2;

} // namespace

TEST_CASE("unit gives the bare generator in every theory") {
    GeneratorContext ctx(3);
    auto guarded = make_theory(TheoryKind::guarded, 2);
    CHECK(unit(*guarded, ctx, y) == Element(GuardedPayload{{y, y}}));
    auto convex = make_theory(TheoryKind::convex);
    CHECK(unit(*convex, ctx, x) == Element(dist({{x, q(1, 1)}})));
    auto sl = make_theory(TheoryKind::semilattice);
    CHECK(unit(*sl, ctx, x) == Element(SemilatticePayload{{x}}));
    CHECK_THROWS_AS(unit(*convex, ctx, 7), InputError);
}

TEST_CASE("apply on the documented identities") {
    GeneratorContext ctx(2);
    auto convex = make_theory(TheoryKind::convex);
    Element dx = convex->unit(x), dy = convex->unit(y);
    std::vector<Element> xx{dx, dx}, xy{dx, dy};
    CHECK(apply(*convex, ctx, Operation::convex(q(1, 2)), xx) == dx);
    CHECK(apply(*convex, ctx, Operation::convex(q(1, 1)), xy) == dx);

    auto guarded = make_theory(TheoryKind::guarded, 2);
    Element f = GuardedPayload{{x, no_gen}}, g = GuardedPayload{{y, y}};
    std::vector<Element> fg{f, g};
    CHECK(apply(*guarded, ctx, Operation::guard(0b11), fg) == f);

    std::vector<Element> one{dx};
    CHECK_THROWS_AS(apply(*convex, ctx, Operation::convex(q(1, 2)), one), InputError);
    CHECK_THROWS_AS(apply(*convex, ctx, Operation::join(), xy), InputError);
}

TEST_CASE("normalize examples") {
    GeneratorContext ctx(3);
    auto sl = make_theory(TheoryKind::semilattice);
    STerm t = STerm::node(Operation::join(), STerm::node(Operation::join(), STerm::leaf(x), STerm::zero()),
                          STerm::leaf(x));
    CHECK(normalize(*sl, ctx, t) == Element(SemilatticePayload{{x}}));

    auto convex = make_theory(TheoryKind::convex);
    STerm half = STerm::node(Operation::convex(q(1, 2)), STerm::leaf(x), STerm::leaf(y));
    STerm c = STerm::node(Operation::convex(q(1, 2)), half, STerm::leaf(y));
    CHECK(normalize(*convex, ctx, c) == Element(dist({{x, q(1, 4)}, {y, q(3, 4)}})));

    // (x ?b y) ?b z is x ?b z: atom 0 is b.
    auto guarded = make_theory(TheoryKind::guarded, 2);
    STerm inner = STerm::node(Operation::guard(0b01), STerm::leaf(x), STerm::leaf(y));
    STerm lhs = STerm::node(Operation::guard(0b01), inner, STerm::leaf(z));
    STerm rhs = STerm::node(Operation::guard(0b01), STerm::leaf(x), STerm::leaf(z));
    CHECK(normalize(*guarded, ctx, lhs) == normalize(*guarded, ctx, rhs));
    CHECK(normalize(*guarded, ctx, lhs) == Element(GuardedPayload{{x, z}}));

    CHECK_THROWS_AS(normalize(*convex, ctx, STerm::leaf(5)), InputError);
}

TEST_CASE("normalize agrees with the direct evaluation oracle") {
    selftest::Rng rng(11);
    for (auto kind : {TheoryKind::guarded, TheoryKind::convex, TheoryKind::semilattice, TheoryKind::probgkat}) {
        TheoryConfig config = selftest::small_config(kind);
        config.seal();
        auto theory = make_theory(config);
        GeneratorContext ctx(4);
        for (int i = 0; i < 300; ++i) {
            STerm t = selftest::random_sterm(rng, config, 4, selftest::pick(rng, 0, 6));
            Element expected = selftest::normalize_oracle(config, t);
            if (kind == TheoryKind::semilattice)
                expected = semilattice_canonical(ctx, std::get<SemilatticePayload>(expected).maxima);
            CHECK(normalize(*theory, ctx, t) == expected);
        }
    }
}

TEST_CASE("element_leq basics") {
    GeneratorContext ctx(2);
    auto convex = make_theory(TheoryKind::convex);
    Element p = dist({{x, q(1, 2)}});
    Element r = dist({{x, q(1, 2)}, {y, q(1, 2)}});
    CHECK(element_leq(*convex, ctx, convex->zero(), r));
    CHECK(element_leq(*convex, ctx, p, p));
    CHECK(element_leq(*convex, ctx, p, r));
    CHECK_FALSE(element_leq(*convex, ctx, r, p));
    Element bad = dist({{x, q(3, 4)}, {y, q(3, 4)}});
    CHECK_THROWS_AS(element_leq(*convex, ctx, bad, p), InputError);
}

TEST_CASE("element_leq is a partial order on random canonical elements") {
    selftest::Rng rng(12);
    for (auto kind : {TheoryKind::guarded, TheoryKind::convex, TheoryKind::semilattice, TheoryKind::probgkat}) {
        auto theory = make_theory(kind, uses_atoms(kind) ? 2 : 0);
        GeneratorContext ctx(selftest::random_partial_order(rng, 4));
        for (int i = 0; i < 200; ++i) {
            Element a = selftest::random_element(rng, *theory, ctx, 4, 4);
            Element b = selftest::random_element(rng, *theory, ctx, 4, 4);
            Element c = selftest::random_element(rng, *theory, ctx, 4, 4);
            CHECK(element_leq(*theory, ctx, a, a));
            if (element_leq(*theory, ctx, a, b) && element_leq(*theory, ctx, b, c))
                CHECK(element_leq(*theory, ctx, a, c));
            if (element_leq(*theory, ctx, a, b) && element_leq(*theory, ctx, b, a))
                CHECK(a == b);
        }
    }
}

TEST_CASE("lfp examples") {
    GeneratorContext ctx(3);
    auto convex = make_theory(TheoryKind::convex);
    Element p = dist({{x, q(1, 2)}, {y, q(1, 2)}});
    CHECK(lfp(*convex, ctx, x, p) == Element(dist({{y, q(1, 1)}})));
    CHECK(lfp(*convex, ctx, x, convex->unit(x)) == convex->zero());
    Element absent = dist({{y, q(1, 3)}});
    CHECK(lfp(*convex, ctx, x, absent) == absent);
}

TEST_CASE("rename examples and monotonicity check") {
    GeneratorContext from(2), to(3);
    auto convex = make_theory(TheoryKind::convex);
    Element p = dist({{x, q(1, 2)}, {y, q(1, 2)}});
    std::vector<Gen> id{0, 1};
    CHECK(rename(*convex, from, GeneratorContext(2), id, p) == p);
    std::vector<Gen> collapse{z, z};
    CHECK(rename(*convex, from, to, collapse, p) == Element(dist({{z, q(1, 1)}})));

    auto sl = make_theory(TheoryKind::semilattice);
    CHECK(rename(*sl, from, to, collapse, Element(SemilatticePayload{{x, y}})) == Element(SemilatticePayload{{z}}));

    Relation ordered = Relation::identity(2);
    ordered.set(0, 1);
    std::vector<Gen> swap{1, 0};
    CHECK_THROWS_AS(rename(*convex, GeneratorContext(ordered), GeneratorContext(ordered), swap, p), InputError);
    std::vector<Gen> outside{0, 9};
    CHECK_THROWS_AS(rename(*convex, from, to, outside, p), InputError);
}

TEST_CASE("generator contexts reject non-preorders") {
    Relation r(2);
    CHECK_THROWS_AS(GeneratorContext{r}, InputError);
}
