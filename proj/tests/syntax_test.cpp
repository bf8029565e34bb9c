#include "opc/errors.hpp"
#include "opc/semantics.hpp"
#include "opc/serialize.hpp"
#include "opc/syntax.hpp"
#include "selftest/random.hpp"

#include <doctest.h>

using namespace opc;

namespace {

TheoryConfig closed(TheoryKind kind, std::vector<std::string> atoms, std::vector<std::string> actions) {
    TheoryConfig c;
    c.theory = kind;
    c.atoms = std::move(atoms);
    c.actions = std::move(actions);
    return c;
}

TheoryConfig open_config(TheoryKind kind) {
    TheoryConfig c;
    c.theory = kind;
    c.open = true;
    return c;
}

std::string roundtrip(std::string_view text, TheoryConfig c) { return format_term(parse_term(text, c), c); }

SourceSpan error_span(std::string_view text, TheoryConfig c) {
    try {
        parse_term(text, c);
    } catch (const ParseError& e) {
        return e.span();
    }
    FAIL("expected a parse error");
    return {};
}

} // namespace

TEST_CASE("parsing the documented terms") {
    TheoryConfig g = closed(TheoryKind::guarded, {"b", "c"}, {"a"});
    Term e1 = parse_term("mu u. a.(a.u ?{b} v)", g);
    CHECK(e1.kind() == TermKind::mu);
    CHECK(e1.name() == "u");
    REQUIRE(e1.body().kind() == TermKind::prefix);
    const Term& choice = e1.body().body();
    CHECK(choice.kind() == TermKind::op);
    CHECK(choice.operation() == Operation::guard(0b01));

    TheoryConfig cv = open_config(TheoryKind::convex);
    Term beta = parse_term("beta v. (v +[1/2] a.v)", cv);
    CHECK(beta.kind() == TermKind::beta);
    CHECK(beta.body().operation() == Operation::convex(Rational(1, 2)));

    TheoryConfig sl = open_config(TheoryKind::semilattice);
    Term join = parse_term("a.(b.0 + c.v)", sl);
    CHECK(join.kind() == TermKind::prefix);
    CHECK(join.body().operation() == Operation::join());
    CHECK(sl.actions == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("binary operators nest to the right") {
    TheoryConfig c = open_config(TheoryKind::convex);
    Term t = parse_term("v +[1/2] w +[1/3] 0", c);
    CHECK(t.children()[0] == Term::var("v"));
    CHECK(t.children()[1].kind() == TermKind::op);
    CHECK(roundtrip("(v +[1/2] w) +[1/3] 0", open_config(TheoryKind::convex)) == "(v +[1/2] w) +[1/3] 0");
}

TEST_CASE("weights accept fractions and terminating decimals") {
    CHECK(roundtrip("v +[0.25] w", open_config(TheoryKind::convex)) == "v +[1/4] w");
    CHECK(roundtrip("v +[2/4] w", open_config(TheoryKind::convex)) == "v +[1/2] w");
    TheoryConfig c = open_config(TheoryKind::convex);
    CHECK_THROWS_AS(parse_term("v +[3/2] w", c), ParseError);
    CHECK_THROWS_AS(parse_rational("0.(3)"), InputError);
    CHECK(parse_rational("0.125") == Rational(1, 8));
}

TEST_CASE("errors carry spans") {
    SourceSpan unclosed = error_span("a.(b.0 + c.v", open_config(TheoryKind::semilattice));
    CHECK(unclosed.begin == 12);
    SourceSpan wrong_theory = error_span("v ?{b} w", open_config(TheoryKind::convex));
    CHECK(wrong_theory.begin == 2);
    CHECK(wrong_theory.end > wrong_theory.begin);
    SourceSpan unknown = error_span("z.v", closed(TheoryKind::convex, {}, {"a"}));
    CHECK(unknown.begin == 0);
    CHECK(unknown.end == 1);
    SourceSpan atom = error_span("v ?{q} w", closed(TheoryKind::guarded, {"b"}, {"a"}));
    CHECK(atom.begin == 4);
}

TEST_CASE("parsing systems") {
    TheoryConfig g = open_config(TheoryKind::guarded);
    EquationSystem s = parse_system("x1 = a.x2 ?{b} v\n"
                                    "x2 = a.x2 ?{b} v\n"
                                    "x3 = a.x2 ?{b} 0\n"
                                    "x1 <= x2\n"
                                    "x3 <= x2\n",
                                    g);
    CHECK(s.unknowns == std::vector<std::string>{"x1", "x2", "x3"});
    CHECK(s.order.test(0, 1));
    CHECK(s.order.test(2, 1));
    CHECK_FALSE(s.order.test(0, 2));

    TheoryConfig c = open_config(TheoryKind::convex);
    EquationSystem one = parse_system("x = a.x", c);
    CHECK(one.size() == 1);
    EquationSystem loop = parse_system("x = x", c);
    CHECK(loop.size() == 1);

    TheoryConfig dup = open_config(TheoryKind::convex);
    CHECK_THROWS_AS(parse_system("x = a.x\nx = 0", dup), InputError);
    TheoryConfig unknown = open_config(TheoryKind::convex);
    CHECK_THROWS_AS(parse_system("x = a.x\nx <= z", unknown), InputError);
    TheoryConfig back = open_config(TheoryKind::guarded);
    CHECK(format_system(s, g) == format_system(parse_system(format_system(s, g), back), back));
}

TEST_CASE("format then parse is the identity on random syntax") {
    selftest::Rng rng(81);
    for (auto kind : {TheoryKind::guarded, TheoryKind::convex, TheoryKind::semilattice, TheoryKind::probgkat}) {
        TheoryConfig c = selftest::small_config(kind);
        c.seal();
        for (int i = 0; i < 200; ++i) {
            Term t = selftest::random_term(rng, c);
            TheoryConfig copy = c;
            std::string text = format_term(t, c);
            CHECK(parse_term(text, copy) == t);
            Expr e = selftest::random_expr(rng, c, 7, false, kind == TheoryKind::probgkat);
            std::string etext = format_expr(e, c);
            CHECK(parse_expr(etext, copy) == e);
            CHECK(format_expr(parse_expr(etext, copy), c) == etext);
        }
    }
}

TEST_CASE("automata round-trip through JSON bit-exactly") {
    selftest::Rng rng(82);
    for (auto kind : {TheoryKind::guarded, TheoryKind::convex, TheoryKind::semilattice, TheoryKind::probgkat}) {
        TheoryConfig c = selftest::small_config(kind, true);
        c.seal();
        for (int i = 0; i < 50; ++i) {
            Calculus calc(c);
            OrderedAutomaton a = calc.reachable(selftest::random_term(rng, c));
            std::string json = automaton_to_json(a);
            OrderedAutomaton back = automaton_from_json(json);
            CHECK(automaton_to_json(back) == json);
            REQUIRE(back.size() == a.size());
            for (std::size_t s = 0; s < a.size(); ++s)
                CHECK(back.branch(s) == a.branch(s));
        }
    }
}

TEST_CASE("malformed JSON documents are rejected") {
    CHECK_THROWS_AS(automaton_from_json("{"), InputError);
    CHECK_THROWS_AS(automaton_from_json(R"({"format_version": 2})"), InputError);
    TheoryConfig c = closed(TheoryKind::convex, {}, {"a"});
    c.seal();
    OrderedAutomaton a(c, {"v"}, 1);
    a.set_branch(0, ConvexPayload{{{a.var_gen(0), Rational(1, 2)}}});
    std::string json = automaton_to_json(a);
    CHECK(json.find("\"1/2\"") != std::string::npos);
    std::string broken = json;
    broken.replace(broken.find("\"1/2\""), 5, "\"3/2\"");
    CHECK_THROWS_AS(automaton_from_json(broken), InputError);
}

TEST_CASE("DOT output labels guarded transitions with atoms and actions") {
    TheoryConfig c = closed(TheoryKind::guarded, {"b", "c"}, {"a"});
    Term e = parse_term("mu u. a.(a.u ?{b} v)", c);
    c.seal();
    Calculus calc(c);
    OrderedAutomaton a = calc.reachable(e);
    std::string dot = automaton_to_dot(a);
    CHECK(dot.find("digraph") == 0);
    CHECK(dot.find("s0 -> s1 [label=\"b,c | a\"]") != std::string::npos);
    CHECK(dot.find("s1 -> s0 [label=\"b | a\"]") != std::string::npos);
    CHECK(dot.find("[label=\"c\"]") != std::string::npos);
    CHECK(dot.find("doublecircle") != std::string::npos);
    CHECK(dot.find("dashed") == std::string::npos);

    OrderedAutomaton ordered(c, {"v"}, 2);
    ordered.set_branch(1, ordered.theory().unit(ordered.var_gen(0)));
    Relation below = Relation::identity(2);
    below.set(0, 1);
    ordered.set_order(below);
    CHECK(automaton_to_dot(ordered).find("s0 -> s1 [style=dashed") != std::string::npos);
}

TEST_CASE("configurations round-trip through JSON") {
    TheoryConfig c = closed(TheoryKind::probgkat, {"b", "c"}, {"a", "d"});
    c.action_order = {{"a", "d"}};
    c.limits.max_states = 50;
    TheoryConfig back = config_from_json(config_to_json(c));
    CHECK(back.theory == c.theory);
    CHECK(back.atoms == c.atoms);
    CHECK(back.actions == c.actions);
    CHECK(back.action_order == c.action_order);
    CHECK(back.limits.max_states == 50);
    CHECK_THROWS_AS(config_from_json(R"({"theory": "fuzzy"})"), InputError);
}
