#include "opc/behaviour.hpp"
#include "opc/errors.hpp"
#include "opc/solver.hpp"
#include "opc/syntax.hpp"
#include "selftest/random.hpp"

#include <doctest.h>

using namespace opc;

namespace {

TheoryConfig open_config(TheoryKind kind) {
    TheoryConfig c;
    c.theory = kind;
    c.open = true;
    return c;
}

/// Replaces every unknown in `t` by its solution.
Term close_over(const Term& t, const EquationSystem& s, const std::vector<Term>& solution) {
    Term out = t;
    for (std::size_t i = 0; i < s.size(); ++i)
        out = substitute(out, solution[i], s.unknowns[i]);
    return out;
}

const char* eg2 = "# three states ordered x1 < x2 > x3\n"
                  "x1 = a.x2 ?{b} v\n"
                  "x2 = a.x2 ?{b} v\n"
                  "x3 = a.x2 ?{b} 0\n"
                  "x1 <= x2\n"
                  "x3 <= x2\n";

} // namespace

TEST_CASE("a single self-loop solves to its mu") {
    TheoryConfig c = open_config(TheoryKind::convex);
    EquationSystem s = parse_system("x = a.x", c);
    auto solution = solve_guarded(s);
    REQUIRE(solution.size() == 1);
    CHECK(format_term(solution[0], c) == "mu x. a.x");
}

TEST_CASE("back-substitution resolves earlier unknowns") {
    TheoryConfig c = open_config(TheoryKind::convex);
    EquationSystem s = parse_system("x = a.y\ny = b.y", c);
    auto solution = solve_guarded(s);
    c.seal();
    Calculus calc(c);
    CHECK(solution[0].free_vars().empty());
    CHECK(behavioural_equiv(calc, solution[0], parse_term("a.(mu y. b.y)", c)));
    CHECK(behavioural_equiv(calc, solution[1], parse_term("mu y. b.y", c)));
}

TEST_CASE("the three-state guarded system keeps its order") {
    TheoryConfig c = open_config(TheoryKind::guarded);
    EquationSystem s = parse_system(eg2, c);
    REQUIRE(s.size() == 3);
    CHECK(s.order.test(0, 1));
    CHECK(s.order.test(2, 1));
    CHECK_FALSE(s.order.test(1, 0));
    check_monotone(s, c);
    auto solution = solve_guarded(s);
    c.seal();
    Calculus calc(c);
    CHECK(behavioural_leq(calc, solution[0], solution[1]));
    CHECK(behavioural_leq(calc, solution[2], solution[1]));
    CHECK_FALSE(behavioural_leq(calc, solution[1], solution[2]));
    CHECK(behavioural_equiv(calc, solution[0], solution[1]));
}

TEST_CASE("solutions satisfy their equations and are unique") {
    selftest::Rng rng(61);
    for (auto kind : {TheoryKind::guarded, TheoryKind::convex, TheoryKind::semilattice, TheoryKind::probgkat}) {
        TheoryConfig c = selftest::small_config(kind);
        c.seal();
        for (int i = 0; i < 60; ++i) {
            EquationSystem s = selftest::random_system(rng, c, selftest::pick(rng, 1, 4));
            auto first = solve_guarded(s);
            auto last = solve_guarded(s, true);
            Calculus calc(c);
            for (std::size_t k = 0; k < s.size(); ++k) {
                CHECK(behavioural_equiv(calc, first[k], close_over(s.rhs[k], s, first)));
                CHECK(behavioural_equiv(calc, first[k], last[k]));
            }
        }
    }
}

TEST_CASE("unguarded systems are rejected with the offending equation") {
    TheoryConfig c = open_config(TheoryKind::convex);
    EquationSystem s = parse_system("x = a.y\ny = y +[1/2] a.x", c);
    CHECK_THROWS_WITH_AS(check_system_guarded(s), doctest::Contains("y"), InputError);
    CHECK_THROWS_AS(solve_guarded(s), InputError);
}

TEST_CASE("monotonicity of declared pairs") {
    TheoryConfig c = open_config(TheoryKind::semilattice);
    EquationSystem ok = parse_system("x = a.v\ny = a.v + b.v\nx <= y", c);
    CHECK_NOTHROW(check_monotone(ok, c));
    TheoryConfig c2 = open_config(TheoryKind::semilattice);
    EquationSystem bad = parse_system("x = a.v + b.v\ny = a.v\nx <= y", c2);
    CHECK_THROWS_AS(check_monotone(bad, c2), InputError);
}

TEST_CASE("associated systems and canonical terms") {
    TheoryConfig c = open_config(TheoryKind::convex);
    Term loop = parse_term("mu u. a.u", c);
    Term ret = parse_term("v", c);
    c.seal();
    Calculus calc(c);
    OrderedAutomaton a = calc.reachable(loop);
    EquationSystem s = associated_system(a);
    REQUIRE(s.size() == 1);
    CHECK(format_term(s.rhs[0], c) == "a." + s.unknowns[0]);
    CHECK(behavioural_equiv(calc, canonical_term(a, 0), loop));

    OrderedAutomaton r = calc.reachable(ret);
    EquationSystem rs = associated_system(r);
    CHECK(format_term(rs.rhs[0], c) == "v");
    CHECK(format_term(canonical_term(r, 0), c) == "v");
}

TEST_CASE("indeterminate names avoid return variables") {
    TheoryConfig c = open_config(TheoryKind::semilattice);
    Term e = parse_term("a.x0 + a.x1", c);
    c.seal();
    Calculus calc(c);
    EquationSystem s = associated_system(calc.reachable(e));
    for (const auto& u : s.unknowns)
        CHECK((u != "x0" && u != "x1"));
    CHECK(behavioural_equiv(calc, canonical_term(calc.reachable(e), 0), e));
}

TEST_CASE("prove_leq examples") {
    TheoryConfig c = open_config(TheoryKind::convex);
    Term lhs = parse_term("mu x. (x +[1/2] a.x)", c);
    Term rhs = parse_term("mu x. a.x", c);
    c.seal();
    Calculus calc(c);
    CHECK(prove_leq(calc, lhs, rhs));
    CHECK(prove_leq(calc, rhs, lhs));
    CHECK(prove_leq(calc, lhs, lhs));
    CHECK(prove_leq(calc, Term::zero(), lhs));
}

TEST_CASE("axiom instances") {
    TheoryConfig c = open_config(TheoryKind::convex);
    Term body = parse_term("v +[1/3] a.(v +[1/2] a.w)", c);
    Term g = parse_term("a.a.w", c);
    c.seal();
    Calculus calc(c);

    Derivation r1b;
    r1b.rule = Rule::r1b;
    r1b.var = "v";
    r1b.body = body;
    CHECK(check_axiom_instance(calc, r1b));

    Derivation unfold;
    unfold.rule = Rule::unfold;
    unfold.var = "v";
    unfold.body = body;
    CHECK(check_axiom_instance(calc, unfold));

    // mu z. a.z is a fixed point of a.v, so UFP equates it with mu v. a.v.
    TheoryConfig c2 = open_config(TheoryKind::convex);
    Term e = parse_term("a.v", c2);
    Term witness = parse_term("mu z. a.z", c2);
    c2.seal();
    Calculus calc2(c2);
    Derivation ufp;
    ufp.rule = Rule::ufp;
    ufp.var = "v";
    ufp.body = e;
    ufp.bound = witness;
    auto inst = instantiate_rule(calc2, ufp);
    CHECK(inst.side_conditions);
    REQUIRE(inst.premises.size() == 1);
    CHECK(behavioural_equiv(calc2, inst.premises[0].lhs, inst.premises[0].rhs));
    CHECK(check_axiom_instance(calc2, ufp));

    Derivation unguarded = ufp;
    unguarded.body = Term::var("v");
    CHECK_FALSE(instantiate_rule(calc2, unguarded).side_conditions);
    CHECK_FALSE(check_axiom_instance(calc2, unguarded));

    Derivation s;
    s.rule = Rule::s;
    s.lower_op = s.upper_op = Operation::convex(Rational(1, 2));
    s.args = {body, g};
    CHECK(check_axiom_instance(calc, s));
    s.args = {body};
    CHECK_THROWS_AS(check_axiom_instance(calc, s), InputError);
    CHECK(to_string(Rule::r1b) == "R1b");
}

TEST_CASE("action rule needs ordered actions") {
    TheoryConfig c;
    c.theory = TheoryKind::semilattice;
    c.actions = {"a", "d"};
    c.action_order = {{"a", "d"}};
    c.seal();
    Calculus calc(c);
    Derivation act;
    act.rule = Rule::act;
    act.body = Term::var("v");
    act.lower_action = "a";
    act.upper_action = "d";
    CHECK(check_axiom_instance(calc, act));
    std::swap(act.lower_action, act.upper_action);
    CHECK_FALSE(check_axiom_instance(calc, act));
}
