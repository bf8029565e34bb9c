#include "opc/semantics.hpp"
#include "opc/syntax.hpp"
#include "opc/term.hpp"
#include "selftest/random.hpp"

#include <doctest.h>

#include <cctype>

using namespace opc;

namespace {

TheoryConfig guarded_config() {
    TheoryConfig c;
    c.theory = TheoryKind::guarded;
    c.atoms = {"b", "c"};
    c.actions = {"a", "d"};
    return c;
}

Term parse(std::string_view text, TheoryConfig config = guarded_config()) { return parse_term(text, config); }

std::string show(const Term& t, const TheoryConfig& config = guarded_config()) { return format_term(t, config); }

/// Rewrites every prefix `a.` to `d.`; the keyword `beta` is never followed by a dot.
std::string raise_actions(std::string text) {
    for (std::size_t i = 0; i + 1 < text.size(); ++i)
        if (text[i] == 'a' && text[i + 1] == '.' && (i == 0 || !std::isalnum(static_cast<unsigned char>(text[i - 1]))))
            text[i] = 'd';
    return text;
}

} // namespace

TEST_CASE("variable analysis") {
    auto v = analyze(parse("v"));
    CHECK(v.free == std::set<std::string>{"v"});
    CHECK(v.guarded.empty());

    auto av = analyze(parse("a.v"));
    CHECK(av.free == std::set<std::string>{"v"});
    CHECK(av.guarded == std::set<std::string>{"v"});

    auto e1 = analyze(parse("mu u. a.(a.u ?{b} v)"));
    CHECK(e1.free == std::set<std::string>{"v"});
    CHECK(e1.bound == std::set<std::string>{"u"});
}

TEST_CASE("guardedness") {
    CHECK(is_guarded(parse("a.v"), "v"));
    CHECK_FALSE(is_guarded(parse("v ?{b} a.v"), "v"));
    CHECK(is_guarded(parse("w"), "v"));
    CHECK(is_guarded(parse("mu v. v"), "v"));
    CHECK_FALSE(is_guarded(parse("beta u. v"), "v"));
}

TEST_CASE("substitution examples") {
    Term g = parse("a.w");
    CHECK(substitute(parse("v"), g, "v") == g);
    Term closed = parse("mu v. a.v");
    CHECK(substitute(closed, g, "v") == closed);
    Term loop = parse("mu u. a.u");
    CHECK(substitute(loop, parse("u"), "w") == loop);
    CHECK(show(substitute(parse("a.v ?{b} v"), g, "v")) == "a.a.w ?{b} a.w");
}

TEST_CASE("substitution avoids capture") {
    // Substituting u for v under a binder of u must rename the binder.
    Term e = parse("mu u. a.(u ?{b} v)");
    Term out = substitute(e, parse("u"), "v");
    REQUIRE(out.kind() == TermKind::mu);
    CHECK(out.name() != "u");
    CHECK(out.free_vars() == std::vector<std::string>{"u"});
    CHECK(is_guarded(out.body(), out.name()));
}

TEST_CASE("guarded substitution touches only occurrences under a prefix") {
    Term e = parse("v ?{b} a.v");
    CHECK(show(substitute_guarded(e, parse("w"), "v")) == "v ?{b} a.w");
    CHECK(show(substitute_guarded(parse("mu u. a.(v ?{b} u)"), parse("w"), "v")) == "mu u. a.(w ?{b} u)");
}

TEST_CASE("guarded substitution unfolds a mu that returns the variable") {
    Term e = parse("mu u. v ?{b} a.u");
    CHECK(show(substitute_guarded(e, parse("w"), "v")) == "beta u. v ?{b} a.(mu u. w ?{b} a.u)");
    CHECK(show(substitute_guarded(parse("beta u. v ?{b} a.v"), parse("w"), "v")) == "beta u. v ?{b} a.w");
}

TEST_CASE("unguarded occurrences are replaced by zero") {
    CHECK(show(zero_unguarded(parse("v ?{b} a.v"), "v")) == "0 ?{b} a.v");
    CHECK(show(zero_unguarded(parse("mu u. v"), "v")) == "mu u. 0");
}

TEST_CASE("syntactic order") {
    TheoryConfig c = guarded_config();
    c.action_order = {{"a", "d"}};
    c.seal();
    CHECK(syntactic_leq(parse("a.v", c), parse("d.v", c), c));
    CHECK_FALSE(syntactic_leq(parse("d.v", c), parse("a.v", c), c));
    CHECK(syntactic_leq(parse("mu x. a.x ?{b} v", c), parse("mu x. d.x ?{b} v", c), c));
    CHECK_FALSE(syntactic_leq(parse("a.v", c), parse("a.w", c), c));
    auto v_below_w = [](const std::string& l, const std::string& r) { return l == r || (l == "v" && r == "w"); };
    CHECK(syntactic_leq(parse("a.v", c), parse("a.w", c), c, v_below_w));
}

TEST_CASE("instantiating a pattern") {
    STerm p = STerm::node(Operation::guard(1), STerm::leaf(0), STerm::node(Operation::guard(2), STerm::leaf(1),
                                                                           STerm::zero()));
    std::vector<Term> leaves{parse("a.v"), parse("w")};
    CHECK(show(instantiate(p, leaves)) == "a.v ?{b} w ?{c} 0");
}

TEST_CASE("reachable states stay within the closure bound") {
    selftest::Rng rng(31);
    for (auto kind : {TheoryKind::guarded, TheoryKind::convex, TheoryKind::semilattice, TheoryKind::probgkat}) {
        TheoryConfig config = selftest::small_config(kind);
        config.seal();
        for (int i = 0; i < 150; ++i) {
            Term e = selftest::random_term(rng, config);
            Calculus calc(config);
            OrderedAutomaton a = calc.reachable(e);
            std::vector<Term> bound = closure_bound(e);
            CHECK(a.size() <= bound.size());
            for (std::size_t s = 0; s < a.size(); ++s)
                for (std::size_t t : a.successors(s))
                    CHECK(t < a.size());
        }
    }
}

TEST_CASE("substitution is monotone in both arguments") {
    selftest::Rng rng(32);
    TheoryConfig c = selftest::small_config(TheoryKind::semilattice, true);
    c.seal();
    selftest::TermShape shape;
    shape.max_size = 6;
    for (int i = 0; i < 400; ++i) {
        Term e = selftest::random_term(rng, c, shape);
        // Raising every action to d gives a term above e.
        std::string text = raise_actions(format_term(e, c));
        TheoryConfig copy = c;
        Term e2 = parse_term(text, copy);
        REQUIRE(syntactic_leq(e, e2, c));
        Term g = selftest::random_term(rng, c, shape);
        CHECK(syntactic_leq(substitute(e, g, "v"), substitute(e2, g, "v"), c));
        CHECK(syntactic_leq(substitute(g, e, "v"), substitute(g, e2, "v"), c));
    }
}
