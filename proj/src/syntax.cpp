#include "opc/syntax.hpp"

#include "opc/errors.hpp"
#include "opc/rational.hpp"

#include <cctype>

namespace opc {

namespace {

enum class Tok { ident, number, weight, punct, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    SourceSpan span;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '#' || c == '\''; }

/// Tokenizes text[begin, end); spans are offsets into the whole text.
class Lexer {
public:
    Lexer(std::string_view text, std::size_t begin, std::size_t end) : text_(text), pos_(begin), end_(end) {
        advance();
    }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < end_ && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        std::size_t start = pos_;
        if (pos_ >= end_) {
            current_ = {Tok::end, {}, {start, start}};
            return;
        }
        char c = text_[pos_];
        if (ident_start(c) || (c == '#' && pos_ + 1 < end_ && ident_char(text_[pos_ + 1]))) {
            ++pos_;
            while (pos_ < end_ && ident_char(text_[pos_]))
                ++pos_;
            current_ = {Tok::ident, std::string(text_.substr(start, pos_ - start)), {start, pos_}};
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (pos_ < end_ && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            current_ = {Tok::number, std::string(text_.substr(start, pos_ - start)), {start, pos_}};
            return;
        }
        auto two = text_.substr(pos_, std::min<std::size_t>(2, end_ - pos_));
        if (two == "+[") {
            std::size_t close = text_.find(']', pos_);
            if (close == std::string_view::npos || close >= end_)
                throw ParseError("unterminated weight", {start, end_});
            pos_ = close + 1;
            current_ = {Tok::weight, std::string(text_.substr(start + 2, close - start - 2)), {start, pos_}};
            return;
        }
        if (two == "?{" || two == "*{" || two == "<=") {
            pos_ += 2;
            current_ = {Tok::punct, std::string(two), {start, pos_}};
            return;
        }
        static constexpr std::string_view singles = "().,;$+}=";
        if (singles.find(c) != std::string_view::npos) {
            ++pos_;
            current_ = {Tok::punct, std::string(1, c), {start, pos_}};
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", {start, start + 1});
    }

    std::string_view text_;
    std::size_t pos_;
    std::size_t end_;
    Token current_;
};

bool is_keyword(std::string_view s) { return s == "mu" || s == "beta"; }

class Parser {
public:
    Parser(std::string_view text, std::size_t begin, std::size_t end, TheoryConfig& config)
        : lex_(text, begin, end), config_(config) {}

    Term term() {
        if (at_keyword())
            return binder();
        Term lhs = unary();
        if (at_binop()) {
            Operation op = binop();
            return Term::binary(std::move(op), std::move(lhs), term());
        }
        return lhs;
    }

    Expr expr() {
        Expr lhs = sequence();
        if (at_binop()) {
            Operation op = binop();
            return Expr::choice(std::move(op), std::move(lhs), expr());
        }
        return lhs;
    }

    void finish() {
        if (lex_.peek().kind != Tok::end)
            fail("unexpected '" + lex_.peek().text + "'");
    }

    Token expect_ident(std::string_view what) {
        if (lex_.peek().kind != Tok::ident)
            fail("expected " + std::string(what));
        return lex_.take();
    }

    bool accept(std::string_view punct) {
        if (lex_.peek().kind == Tok::punct && lex_.peek().text == punct) {
            lex_.take();
            return true;
        }
        return false;
    }

    void expect(std::string_view punct) {
        if (!accept(punct))
            fail("expected '" + std::string(punct) + "'");
    }

    [[noreturn]] void fail(const std::string& message) const {
        const Token& t = lex_.peek();
        throw ParseError(t.kind == Tok::end ? message + " before end of input" : message, t.span);
    }

private:
    bool at_keyword() const { return lex_.peek().kind == Tok::ident && is_keyword(lex_.peek().text); }

    bool at_binop() const {
        const Token& t = lex_.peek();
        return t.kind == Tok::weight || (t.kind == Tok::punct && (t.text == "+" || t.text == "?{"));
    }

    Term binder() {
        Token kw = lex_.take();
        Token var = expect_ident("a bound variable");
        check_var(var);
        expect(".");
        Term body = term();
        return kw.text == "mu" ? Term::mu(var.text, std::move(body)) : Term::beta(var.text, std::move(body));
    }

    Term unary() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::number) {
            if (t.text != "0")
                fail("unexpected number '" + t.text + "'");
            lex_.take();
            return Term::zero();
        }
        if (accept("(")) {
            Term inner = term();
            expect(")");
            return inner;
        }
        if (t.kind != Tok::ident)
            fail("expected a term");
        if (is_keyword(t.text))
            fail("a binder here needs parentheses");
        Token name = lex_.take();
        if (accept(".")) {
            intern_action(name);
            Term body = at_keyword() ? binder() : unary();
            return Term::prefix(name.text, std::move(body));
        }
        check_var(name);
        return Term::var(name.text);
    }

    void check_var(const Token& t) const {
        if (is_keyword(t.text) || t.text.front() == '#')
            throw ParseError("'" + t.text + "' cannot name a variable", t.span);
    }

    void intern_action(const Token& t) {
        try {
            config_.intern_action(t.text);
        } catch (const InputError& e) {
            throw ParseError(e.what(), t.span);
        }
    }

    Operation binop() {
        Token t = lex_.take();
        if (t.kind == Tok::weight) {
            Rational r;
            try {
                r = parse_rational(t.text);
            } catch (const InputError& e) {
                throw ParseError(e.what(), t.span);
            }
            if (r < 0 || r > 1)
                throw ParseError("weight " + t.text + " is outside [0, 1]", t.span);
            if (config_.theory != TheoryKind::convex && config_.theory != TheoryKind::probgkat)
                throw ParseError("probabilistic choice needs the convex or probgkat theory", t.span);
            return Operation::convex(std::move(r));
        }
        if (t.text == "+") {
            if (config_.theory != TheoryKind::semilattice)
                throw ParseError("join needs the semilattice theory", t.span);
            return Operation::join();
        }
        if (!uses_atoms(config_.theory))
            throw ParseError("guarded choice needs the guarded or probgkat theory", t.span);
        AtomSet test = 0;
        if (!accept("}")) {
            do {
                Token atom = lex_.peek();
                if (atom.kind != Tok::ident || is_keyword(atom.text) ||
                    (atom.text.front() == '#' && atom.text != rest_atom))
                    fail("expected an atom");
                lex_.take();
                std::size_t index = 0;
                try {
                    index = config_.intern_atom(atom.text);
                } catch (const InputError& e) {
                    throw ParseError(e.what(), atom.span);
                }
                test |= AtomSet(1) << index;
            } while (accept(","));
            expect("}");
        }
        return Operation::guard(test);
    }

    Expr sequence() {
        Expr e = postfix();
        while (accept(";"))
            e = Expr::seq(std::move(e), postfix());
        return e;
    }

    Expr postfix() {
        Expr e = atom();
        while (accept("*{")) {
            LoopPayload payload;
            if (at_binop()) {
                payload = LoopPayload::star_of(binop());
            } else {
                payload = LoopPayload::poly(pattern());
            }
            expect("}");
            e = Expr::loop(std::move(e), std::move(payload));
        }
        return e;
    }

    Expr atom() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::number) {
            if (t.text != "0" && t.text != "1")
                fail("unexpected number '" + t.text + "'");
            return lex_.take().text == "0" ? Expr::zero() : Expr::one();
        }
        if (accept("(")) {
            Expr inner = expr();
            expect(")");
            return inner;
        }
        if (accept("$")) {
            Token name = expect_ident("a constant name");
            check_var(name);
            return Expr::ret(name.text);
        }
        if (t.kind != Tok::ident || is_keyword(t.text) || t.text.front() == '#')
            fail("expected an expression");
        Token name = lex_.take();
        intern_action(name);
        return Expr::action(name.text);
    }

    STerm pattern() {
        STerm lhs = pattern_atom();
        if (at_binop()) {
            Operation op = binop();
            return STerm::node(std::move(op), std::move(lhs), pattern());
        }
        return lhs;
    }

    STerm pattern_atom() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::number && t.text == "0") {
            lex_.take();
            return STerm::zero();
        }
        if (accept("(")) {
            STerm inner = pattern();
            expect(")");
            return inner;
        }
        if (t.kind == Tok::ident && (t.text == "x" || t.text == "y"))
            return STerm::leaf(lex_.take().text == "x" ? loop_body_gen : loop_exit_gen);
        fail("expected x, y or 0 in a loop pattern");
    }

    Lexer lex_;
    TheoryConfig& config_;
};

bool is_binary(const Term& t) { return t.kind() == TermKind::op && !t.is_zero(); }

void print_term(const Term& t, const TheoryConfig& config, std::string& out) {
    switch (t.kind()) {
    case TermKind::var: out += t.name(); return;
    case TermKind::op: {
        if (t.is_zero()) {
            out += '0';
            return;
        }
        const Term& lhs = t.children()[0];
        bool wrap = is_binary(lhs) || lhs.is_binder();
        if (wrap)
            out += '(';
        print_term(lhs, config, out);
        if (wrap)
            out += ')';
        out += ' ';
        out += format_operation(t.operation(), config);
        out += ' ';
        print_term(t.children()[1], config, out);
        return;
    }
    case TermKind::prefix: {
        out += t.name();
        out += '.';
        bool wrap = is_binary(t.body()) || t.body().is_binder();
        if (wrap)
            out += '(';
        print_term(t.body(), config, out);
        if (wrap)
            out += ')';
        return;
    }
    case TermKind::beta:
    case TermKind::mu:
        out += t.kind() == TermKind::mu ? "mu " : "beta ";
        out += t.name();
        out += ". ";
        print_term(t.body(), config, out);
        return;
    }
}

void print_pattern(const STerm& t, const TheoryConfig& config, std::string& out) {
    if (t.is_leaf()) {
        out += t.generator() == loop_body_gen ? 'x' : 'y';
        return;
    }
    if (t.op().kind == OpKind::zero) {
        out += '0';
        return;
    }
    const STerm& lhs = t.children()[0];
    bool wrap = !lhs.is_leaf() && lhs.op().kind != OpKind::zero;
    if (wrap)
        out += '(';
    print_pattern(lhs, config, out);
    if (wrap)
        out += ')';
    out += ' ';
    out += format_operation(t.op(), config);
    out += ' ';
    print_pattern(t.children()[1], config, out);
}

void print_expr(const Expr& e, const TheoryConfig& config, std::string& out) {
    auto wrapped = [&](const Expr& child, bool wrap) {
        if (wrap)
            out += '(';
        print_expr(child, config, out);
        if (wrap)
            out += ')';
    };
    switch (e.kind()) {
    case ExprKind::zero: out += '0'; return;
    case ExprKind::one: out += '1'; return;
    case ExprKind::action: out += e.name(); return;
    case ExprKind::ret:
        out += '$';
        out += e.name();
        return;
    case ExprKind::choice:
        wrapped(e.lhs(), e.lhs().kind() == ExprKind::choice);
        out += ' ';
        out += format_operation(e.op(), config);
        out += ' ';
        print_expr(e.rhs(), config, out);
        return;
    case ExprKind::seq:
        wrapped(e.lhs(), e.lhs().kind() == ExprKind::choice);
        out += ';';
        wrapped(e.rhs(), e.rhs().kind() == ExprKind::choice || e.rhs().kind() == ExprKind::seq);
        return;
    case ExprKind::loop:
        wrapped(e.body(), e.body().kind() == ExprKind::choice || e.body().kind() == ExprKind::seq);
        out += "*{";
        if (e.payload().star)
            out += format_operation(e.payload().pattern.op(), config);
        else
            print_pattern(e.payload().pattern, config, out);
        out += '}';
        return;
    }
}

} // namespace

Term parse_term(std::string_view text, TheoryConfig& config) {
    Parser p(text, 0, text.size(), config);
    Term t = p.term();
    p.finish();
    return t;
}

std::string format_term(const Term& term, const TheoryConfig& config) {
    std::string out;
    print_term(term, config, out);
    return out;
}

Expr parse_expr(std::string_view text, TheoryConfig& config) {
    Parser p(text, 0, text.size(), config);
    Expr e = p.expr();
    p.finish();
    return e;
}

std::string format_expr(const Expr& expr, const TheoryConfig& config) {
    std::string out;
    print_expr(expr, config, out);
    return out;
}

std::string format_operation(const Operation& op, const TheoryConfig& config) {
    switch (op.kind) {
    case OpKind::zero: return "0";
    case OpKind::join: return "+";
    case OpKind::convex: return "+[" + to_string(op.weight) + "]";
    case OpKind::guard: {
        std::string out = "?{";
        bool first = true;
        for (std::size_t a = 0; a < 64; ++a) {
            if (!(op.test >> a & 1))
                continue;
            if (!first)
                out += ',';
            first = false;
            out += a < config.atoms.size() ? config.atoms[a] : "#" + std::to_string(a);
        }
        return out + "}";
    }
    }
    return "?";
}

EquationSystem parse_system(std::string_view text, TheoryConfig& config) {
    EquationSystem system;
    struct OrderLine {
        Token lo, hi;
    };
    std::vector<OrderLine> order_lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::size_t first = pos;
        while (first < eol && std::isspace(static_cast<unsigned char>(text[first])))
            ++first;
        if (first < eol && text[first] != '#') {
            Parser p(text, first, eol, config);
            Token name = p.expect_ident("an indeterminate");
            if (is_keyword(name.text))
                throw ParseError("'" + name.text + "' cannot name an indeterminate", name.span);
            if (p.accept("=")) {
                if (system.index(name.text))
                    throw ParseError("'" + name.text + "' is defined twice", name.span);
                Term rhs = p.term();
                p.finish();
                system.unknowns.push_back(name.text);
                system.rhs.push_back(std::move(rhs));
            } else if (p.accept("<=")) {
                Token hi = p.expect_ident("an indeterminate");
                p.finish();
                order_lines.push_back({name, hi});
            } else {
                p.fail("expected '=' or '<='");
            }
        }
        pos = eol + 1;
    }
    system.order = Relation::identity(system.size());
    for (const auto& [lo, hi] : order_lines) {
        auto i = system.index(lo.text);
        auto j = system.index(hi.text);
        if (!i)
            throw ParseError("unknown indeterminate '" + lo.text + "'", lo.span);
        if (!j)
            throw ParseError("unknown indeterminate '" + hi.text + "'", hi.span);
        system.order.set(*i, *j);
    }
    system.order.close_preorder();
    return system;
}

std::string format_system(const EquationSystem& system, const TheoryConfig& config) {
    std::string out;
    for (std::size_t i = 0; i < system.size(); ++i)
        out += system.unknowns[i] + " = " + format_term(system.rhs[i], config) + "\n";
    Relation closed = system.order;
    closed.close_preorder();
    for (auto [x, y] : closed.strict_pairs())
        out += system.unknowns[x] + " <= " + system.unknowns[y] + "\n";
    return out;
}

std::string format_element(const Theory& theory, const TheoryConfig& config, const Element& p,
                           const std::function<Term(Gen)>& leaf) {
    STerm shape = theory.represent(p);
    std::vector<Gen> gens = shape.generators();
    std::vector<Term> leaves(gens.empty() ? 0 : gens.back() + 1, Term::zero());
    for (Gen g : gens)
        leaves[g] = leaf(g);
    return format_term(instantiate(shape, leaves), config);
}

} // namespace opc
