#include "opc/kernel.hpp"

#include "opc/errors.hpp"

#include <algorithm>
#include <tuple>

namespace opc {

GeneratorContext::GeneratorContext(Relation preorder) : order_(std::move(preorder)) {
    if (!order_.is_preorder())
        throw InputError("generator order is not reflexive and transitive");
}

bool operator<(const Operation& a, const Operation& b) {
    if (a.kind != b.kind)
        return a.kind < b.kind;
    if (a.test != b.test)
        return a.test < b.test;
    return a.weight < b.weight;
}

bool operation_leq(const Operation& lhs, const Operation& rhs) {
    return lhs == rhs;
}

STerm STerm::leaf(Gen g) {
    STerm t;
    t.gen_ = g;
    return t;
}

STerm STerm::node(Operation op, STerm lhs, STerm rhs) {
    STerm t;
    t.op_ = std::move(op);
    t.children_.reserve(2);
    t.children_.push_back(std::move(lhs));
    t.children_.push_back(std::move(rhs));
    return t;
}

std::vector<Gen> STerm::generators() const {
    std::vector<Gen> out;
    std::vector<const STerm*> stack{this};
    while (!stack.empty()) {
        const STerm* t = stack.back();
        stack.pop_back();
        if (t->is_leaf())
            out.push_back(t->gen_);
        for (const auto& c : t->children_)
            stack.push_back(&c);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::size_t STerm::size() const {
    std::size_t n = 1;
    for (const auto& c : children_)
        n += c.size();
    return n;
}

Rational ConvexPayload::mass() const {
    Rational m(0);
    for (const auto& [g, w] : weights)
        m += w;
    return m;
}

Rational ConvexPayload::at(Gen g) const {
    auto it = std::lower_bound(weights.begin(), weights.end(), g,
                               [](const auto& entry, Gen key) { return entry.first < key; });
    if (it != weights.end() && it->first == g)
        return it->second;
    return Rational(0);
}

Element Theory::evaluate(const GeneratorOrder& ord, const STerm& t, const Substitution& leaf) const {
    if (t.is_leaf())
        return leaf(t.generator());
    if (t.op().kind == OpKind::zero) {
        if (!t.children().empty())
            throw InputError("constant 0 applied to arguments");
        return zero();
    }
    if (t.children().size() != t.op().arity())
        throw InputError("operation arity mismatch");
    std::vector<Element> args;
    args.reserve(t.children().size());
    for (const auto& c : t.children())
        args.push_back(evaluate(ord, c, leaf));
    return apply(ord, t.op(), args);
}

Element Theory::normalize(const GeneratorOrder& ord, const STerm& t) const {
    return evaluate(ord, t, [this](Gen g) { return unit(g); });
}

Element Theory::rename(const GeneratorOrder& target, const Element& p, const GenMap& h) const {
    return bind(target, p, [&](Gen g) { return unit(h(g)); });
}

Element Theory::substitute(const GeneratorOrder& ord, const Element& p, Gen g, const Element& q) const {
    return bind(ord, p, [&](Gen x) { return x == g ? q : unit(x); });
}

namespace {

void require_member(const GeneratorContext& ctx, Gen g) {
    if (!ctx.contains(g))
        throw InputError("generator " + std::to_string(g) + " is not in the context");
}

void require_element(const Theory& theory, const GeneratorContext& ctx, const Element& p) {
    if (!theory.well_formed(p))
        throw InputError("element does not belong to theory '" + std::string(to_string(theory.kind())) + "'");
    for (Gen g : theory.support(p))
        require_member(ctx, g);
}

} // namespace

Element unit(const Theory& theory, const GeneratorContext& ctx, Gen g) {
    require_member(ctx, g);
    return theory.unit(g);
}

Element apply(const Theory& theory, const GeneratorContext& ctx, const Operation& op, std::span<const Element> args) {
    for (const auto& a : args)
        require_element(theory, ctx, a);
    return theory.apply(ctx, op, args);
}

Element normalize(const Theory& theory, const GeneratorContext& ctx, const STerm& t) {
    for (Gen g : t.generators())
        require_member(ctx, g);
    return theory.normalize(ctx, t);
}

bool element_leq(const Theory& theory, const GeneratorContext& ctx, const Element& p, const Element& q) {
    require_element(theory, ctx, p);
    require_element(theory, ctx, q);
    return theory.leq(ctx, p, q);
}

Element lfp(const Theory& theory, const GeneratorContext& ctx, Gen g, const Element& p) {
    require_member(ctx, g);
    require_element(theory, ctx, p);
    return theory.lfp(g, p);
}

Element rename(const Theory& theory, const GeneratorContext& from, const GeneratorContext& to,
               std::span<const Gen> h, const Element& p) {
    if (h.size() != from.size())
        throw InputError("generator map does not cover the source context");
    for (Gen g : h)
        require_member(to, g);
    for (Gen a = 0; a < from.size(); ++a)
        for (Gen b = 0; b < from.size(); ++b)
            if (from.leq(a, b) && !to.leq(h[a], h[b]))
                throw InputError("generator map is not monotone");
    require_element(theory, from, p);
    return theory.rename(to, p, [&](Gen g) { return h[g]; });
}

} // namespace opc
