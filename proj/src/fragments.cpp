#include "opc/fragments.hpp"

#include "opc/errors.hpp"
#include "opc/syntax.hpp"

#include <functional>
#include <set>

namespace opc {

struct Expr::Node {
    ExprKind kind = ExprKind::zero;
    std::string name;
    Operation op;
    LoopPayload payload;
    std::vector<Expr> children;
    std::size_t size = 1;
    std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
    return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_op(const Operation& op) {
    std::size_t h = mix(static_cast<std::size_t>(op.kind), op.test);
    h = mix(h, mpz_get_ui(op.weight.get_num_mpz_t()));
    return mix(h, mpz_get_ui(op.weight.get_den_mpz_t()));
}

std::size_t hash_sterm(const STerm& t) {
    if (t.is_leaf())
        return mix(7, t.generator());
    std::size_t h = hash_op(t.op());
    for (const auto& c : t.children())
        h = mix(h, hash_sterm(c));
    return h;
}

} // namespace

LoopPayload LoopPayload::star_of(const Operation& op) {
    if (op.arity() != 2)
        throw InputError("a star loop needs a binary operation");
    return {STerm::node(op, STerm::leaf(loop_body_gen), STerm::leaf(loop_exit_gen)), true};
}

LoopPayload LoopPayload::poly(STerm pattern) {
    for (Gen g : pattern.generators())
        if (g != loop_body_gen && g != loop_exit_gen)
            throw InputError("a loop pattern may only mention x and y");
    return {std::move(pattern), false};
}

Expr Expr::make(ExprKind kind, std::string name, Operation op, LoopPayload payload, std::vector<Expr> children) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->hash = mix(static_cast<std::size_t>(kind) + 11, std::hash<std::string>{}(name));
    if (kind == ExprKind::choice)
        node->hash = mix(node->hash, hash_op(op));
    if (kind == ExprKind::loop)
        node->hash = mix(mix(node->hash, hash_sterm(payload.pattern)), payload.star ? 1 : 2);
    for (const auto& c : children) {
        node->size += c.size();
        node->hash = mix(node->hash, c.hash());
    }
    node->name = std::move(name);
    node->op = std::move(op);
    node->payload = std::move(payload);
    node->children = std::move(children);
    return Expr(std::move(node));
}

Expr Expr::zero() {
    static const Expr e = make(ExprKind::zero, {}, {}, {}, {});
    return e;
}

Expr Expr::one() {
    static const Expr e = make(ExprKind::one, {}, {}, {}, {});
    return e;
}

Expr Expr::action(std::string name) { return make(ExprKind::action, std::move(name), {}, {}, {}); }
Expr Expr::ret(std::string name) { return make(ExprKind::ret, std::move(name), {}, {}, {}); }

Expr Expr::choice(Operation op, Expr lhs, Expr rhs) {
    if (op.arity() != 2)
        throw InputError("choice needs a binary operation");
    return make(ExprKind::choice, {}, std::move(op), {}, {std::move(lhs), std::move(rhs)});
}

Expr Expr::seq(Expr lhs, Expr rhs) { return make(ExprKind::seq, {}, {}, {}, {std::move(lhs), std::move(rhs)}); }

Expr Expr::loop(Expr body, LoopPayload payload) {
    return make(ExprKind::loop, {}, {}, std::move(payload), {std::move(body)});
}

ExprKind Expr::kind() const noexcept { return node_->kind; }
const std::string& Expr::name() const noexcept { return node_->name; }
const Operation& Expr::op() const noexcept { return node_->op; }
const LoopPayload& Expr::payload() const noexcept { return node_->payload; }
const Expr& Expr::lhs() const noexcept { return node_->children[0]; }
const Expr& Expr::rhs() const noexcept { return node_->children[1]; }
std::size_t Expr::size() const noexcept { return node_->size; }
std::size_t Expr::hash() const noexcept { return node_->hash; }

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_)
        return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    return x.hash == y.hash && x.kind == y.kind && x.size == y.size && x.name == y.name && x.op == y.op &&
           x.payload == y.payload && x.children == y.children;
}

bool Expr::is_polystar() const {
    if (kind() == ExprKind::ret)
        return false;
    for (const auto& c : node_->children)
        if (!c.is_polystar())
            return false;
    return true;
}

bool Expr::is_star() const {
    if (kind() == ExprKind::ret || (kind() == ExprKind::loop && !payload().star))
        return false;
    for (const auto& c : node_->children)
        if (!c.is_star())
            return false;
    return true;
}

namespace {

class Translator {
public:
    explicit Translator(bool constants) : constants_(constants) {}

    Term run(const Expr& e) {
        switch (e.kind()) {
        case ExprKind::zero: return Term::zero();
        case ExprKind::one: return Term::var(std::string(unit_var));
        case ExprKind::action: return Term::prefix(e.name(), Term::var(std::string(unit_var)));
        case ExprKind::ret:
            if (!constants_)
                throw InputError("return constants need the probgkat theory");
            if (e.name().empty() || e.name().front() == '_')
                throw InputError("constant '" + e.name() + "' collides with a reserved variable");
            return Term::var(e.name());
        case ExprKind::choice: return Term::binary(e.op(), run(e.lhs()), run(e.rhs()));
        case ExprKind::seq: {
            Term first = run(e.lhs());
            return substitute(first, run(e.rhs()), unit_var);
        }
        case ExprKind::loop: {
            std::string loop_var = "_v" + std::to_string(++loops_);
            Term body = substitute(run(e.body()), Term::var(loop_var), unit_var);
            std::vector<Term> leaves{std::move(body), Term::var(std::string(unit_var))};
            return Term::mu(loop_var, instantiate(e.payload().pattern, leaves));
        }
        }
        return Term::zero();
    }

private:
    bool constants_;
    std::size_t loops_ = 0;
};

} // namespace

Term translate_star(const Expr& e) {
    if (!e.is_star())
        throw InputError("not a star expression");
    return Translator(false).run(e);
}

Term translate_polystar(const Expr& e) {
    if (!e.is_polystar())
        throw InputError("not a polystar expression");
    return Translator(false).run(e);
}

Term translate_probgkat(const Expr& e, const TheoryConfig& config) {
    if (config.theory != TheoryKind::probgkat)
        throw InputError("probgkat translation needs the probgkat theory");
    return Translator(true).run(e);
}

Term translate(const Expr& e, const TheoryConfig& config) {
    if (config.theory == TheoryKind::probgkat)
        return translate_probgkat(e, config);
    return translate_polystar(e);
}

bool is_guarded_expr(const Expr& e) {
    return is_guarded(Translator(true).run(e), unit_var);
}

PolystarCalculus::PolystarCalculus(TheoryConfig config) : config_(std::move(config)) {
    config_.seal();
    config_.validate();
    theory_ = make_theory(config_);
    gens_.push_back(GenInfo{GenInfo::Kind::tick, {}, 0, Expr::zero()});
    gens_.push_back(GenInfo{GenInfo::Kind::placeholder, {}, 0, Expr::zero()});
}

Gen PolystarCalculus::var_gen(const std::string& name) {
    auto [it, inserted] = var_gens_.try_emplace(name, static_cast<Gen>(gens_.size()));
    if (inserted)
        gens_.push_back(GenInfo{GenInfo::Kind::var, name, 0, Expr::zero()});
    return it->second;
}

Gen PolystarCalculus::pair_gen(std::size_t action, const Expr& target) {
    auto [it, inserted] = pair_gens_.try_emplace(PairKey{action, target}, static_cast<Gen>(gens_.size()));
    if (inserted)
        gens_.push_back(GenInfo{GenInfo::Kind::pair, {}, action, target});
    return it->second;
}

std::size_t PolystarCalculus::action_of(const std::string& name) const {
    auto a = config_.action_index(name);
    if (!a)
        throw InputError("unknown action '" + name + "'");
    return *a;
}

Element PolystarCalculus::step(const Expr& e) {
    if (auto it = steps_.find(e); it != steps_.end())
        return it->second;
    Element out;
    switch (e.kind()) {
    case ExprKind::zero: out = theory_->zero(); break;
    case ExprKind::one: out = theory_->unit(tick); break;
    case ExprKind::action: out = theory_->unit(pair_gen(action_of(e.name()), Expr::one())); break;
    case ExprKind::ret:
        if (config_.theory != TheoryKind::probgkat)
            throw InputError("return constants need the probgkat theory");
        out = theory_->unit(var_gen(e.name()));
        break;
    case ExprKind::choice: {
        std::vector<Element> args{step(e.lhs()), step(e.rhs())};
        out = theory_->apply(order_, e.op(), args);
        break;
    }
    case ExprKind::seq: {
        Element first = step(e.lhs());
        Element then = step(e.rhs());
        const Expr& rest = e.rhs();
        out = theory_->bind(order_, first, [&](Gen g) -> Element {
            if (g == tick)
                return then;
            if (gens_[g].kind != GenInfo::Kind::pair)
                return theory_->unit(g);
            std::size_t action = gens_[g].action;
            Expr target = gens_[g].target;
            return theory_->unit(pair_gen(action, Expr::seq(std::move(target), rest)));
        });
        break;
    }
    case ExprKind::loop: {
        Element body = step(e.body());
        Element continued = theory_->bind(order_, body, [&](Gen g) -> Element {
            if (g == tick)
                return theory_->unit(placeholder);
            if (gens_[g].kind != GenInfo::Kind::pair)
                return theory_->unit(g);
            std::size_t action = gens_[g].action;
            Expr target = gens_[g].target;
            return theory_->unit(pair_gen(action, Expr::seq(std::move(target), e)));
        });
        Element unrolled = theory_->evaluate(order_, e.payload().pattern, [&](Gen leaf) {
            return leaf == loop_body_gen ? continued : theory_->unit(tick);
        });
        out = theory_->lfp(placeholder, unrolled);
        break;
    }
    }
    steps_.emplace(e, out);
    return out;
}

OrderedAutomaton PolystarCalculus::explore(const Expr& e) {
    std::vector<Expr> states{e};
    std::vector<Element> steps;
    std::unordered_map<Expr, std::size_t, ExprHash> index{{e, 0}};
    std::set<std::string> vars;
    for (std::size_t i = 0; i < states.size(); ++i) {
        steps.push_back(step(states[i]));
        for (Gen g : theory_->support(steps.back())) {
            const auto& info = gens_[g];
            if (info.kind == GenInfo::Kind::tick)
                vars.insert(std::string(unit_var));
            else if (info.kind == GenInfo::Kind::var)
                vars.insert(info.var);
            else if (info.kind == GenInfo::Kind::pair) {
                auto [it, inserted] = index.try_emplace(info.target, states.size());
                if (inserted) {
                    if (states.size() >= config_.limits.max_states)
                        throw ResourceError("more than " + std::to_string(config_.limits.max_states) +
                                            " reachable states");
                    states.push_back(info.target);
                }
            }
        }
    }
    OrderedAutomaton out(config_, {vars.begin(), vars.end()}, states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        auto encoded = theory_->rename(order_, steps[i], [&](Gen g) {
            const auto& info = gens_[g];
            switch (info.kind) {
            case GenInfo::Kind::tick: return out.var_gen(*out.var_index(unit_var));
            case GenInfo::Kind::var: return out.var_gen(*out.var_index(info.var));
            case GenInfo::Kind::pair: return out.pair_gen(info.action, index.at(info.target));
            case GenInfo::Kind::placeholder: break;
            }
            throw InputError("loop placeholder escaped its loop");
        });
        out.set_branch(i, std::move(encoded));
        out.set_label(i, format_expr(states[i], config_));
    }
    return out;
}

} // namespace opc
