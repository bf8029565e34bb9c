#include "opc/term.hpp"

#include "opc/errors.hpp"

#include <algorithm>
#include <functional>

namespace opc {

struct TermNode {
    TermKind kind = TermKind::var;
    std::string name;
    Operation op;
    std::vector<Term> children;
    std::vector<std::string> free;
    std::size_t size = 1;
    std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
    return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_operation(const Operation& op) {
    std::size_t h = std::hash<int>{}(static_cast<int>(op.kind));
    h = mix(h, std::hash<std::uint64_t>{}(op.test));
    if (op.kind == OpKind::convex) {
        h = mix(h, mpz_get_ui(op.weight.get_num_mpz_t()));
        h = mix(h, mpz_get_ui(op.weight.get_den_mpz_t()));
    }
    return h;
}

std::vector<std::string> merge_free(const std::vector<Term>& children) {
    std::vector<std::string> out;
    for (const auto& c : children) {
        std::vector<std::string> merged;
        std::set_union(out.begin(), out.end(), c.free_vars().begin(), c.free_vars().end(),
                       std::back_inserter(merged));
        out = std::move(merged);
    }
    return out;
}

} // namespace

Term Term::var(std::string name) {
    auto node = std::make_shared<TermNode>();
    node->kind = TermKind::var;
    node->free = {name};
    node->hash = mix(1, std::hash<std::string>{}(name));
    node->name = std::move(name);
    return Term(std::move(node));
}

Term Term::zero() {
    static const Term zero_term = op(Operation::zero(), {});
    return zero_term;
}

Term Term::op(Operation op, std::vector<Term> children) {
    if (children.size() != op.arity())
        throw InputError("operation arity mismatch in process term");
    auto node = std::make_shared<TermNode>();
    node->kind = TermKind::op;
    node->hash = mix(2, hash_operation(op));
    for (const auto& c : children) {
        node->size += c.size();
        node->hash = mix(node->hash, c.hash());
    }
    node->free = merge_free(children);
    node->op = std::move(op);
    node->children = std::move(children);
    return Term(std::move(node));
}

Term Term::binary(Operation op, Term lhs, Term rhs) {
    std::vector<Term> children;
    children.reserve(2);
    children.push_back(std::move(lhs));
    children.push_back(std::move(rhs));
    return Term::op(std::move(op), std::move(children));
}

Term Term::prefix(std::string action, Term body) {
    auto node = std::make_shared<TermNode>();
    node->kind = TermKind::prefix;
    node->hash = mix(mix(3, std::hash<std::string>{}(action)), body.hash());
    node->size = 1 + body.size();
    node->free = body.free_vars();
    node->name = std::move(action);
    node->children.push_back(std::move(body));
    return Term(std::move(node));
}

Term Term::binder(TermKind kind, std::string var, Term body) {
    auto node = std::make_shared<TermNode>();
    node->kind = kind;
    node->hash = mix(mix(kind == TermKind::beta ? 4 : 5, std::hash<std::string>{}(var)), body.hash());
    node->size = 1 + body.size();
    node->free = body.free_vars();
    node->free.erase(std::remove(node->free.begin(), node->free.end(), var), node->free.end());
    node->name = std::move(var);
    node->children.push_back(std::move(body));
    return Term(std::move(node));
}

Term Term::beta(std::string var, Term body) {
    return binder(TermKind::beta, std::move(var), std::move(body));
}

Term Term::mu(std::string var, Term body) {
    return binder(TermKind::mu, std::move(var), std::move(body));
}

TermKind Term::kind() const noexcept { return node_->kind; }
const std::string& Term::name() const noexcept { return node_->name; }
const Operation& Term::operation() const noexcept { return node_->op; }
std::span<const Term> Term::children() const noexcept { return node_->children; }
const std::vector<std::string>& Term::free_vars() const noexcept { return node_->free; }
std::size_t Term::size() const noexcept { return node_->size; }
std::size_t Term::hash() const noexcept { return node_->hash; }

bool Term::has_free(std::string_view v) const {
    const auto& f = node_->free;
    auto it = std::lower_bound(f.begin(), f.end(), v, [](const std::string& a, std::string_view b) { return a < b; });
    return it != f.end() && *it == v;
}

bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_)
        return true;
    if (a.hash() != b.hash() || a.kind() != b.kind() || a.size() != b.size() || a.name() != b.name())
        return false;
    if (a.kind() == TermKind::op && !(a.operation() == b.operation()))
        return false;
    auto ca = a.children();
    auto cb = b.children();
    return std::equal(ca.begin(), ca.end(), cb.begin(), cb.end());
}

bool operator<(const Term& a, const Term& b) {
    if (a.node_ == b.node_)
        return false;
    if (a.kind() != b.kind())
        return a.kind() < b.kind();
    if (a.name() != b.name())
        return a.name() < b.name();
    if (a.kind() == TermKind::op && !(a.operation() == b.operation()))
        return a.operation() < b.operation();
    auto ca = a.children();
    auto cb = b.children();
    return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end());
}

namespace {

Term rebuild_binder(const Term& e, std::string name, Term body) {
    return e.kind() == TermKind::beta ? Term::beta(std::move(name), std::move(body))
                                      : Term::mu(std::move(name), std::move(body));
}

Term map_children(const Term& e, const std::function<Term(const Term&)>& f) {
    std::vector<Term> children;
    children.reserve(e.children().size());
    bool changed = false;
    for (const auto& c : e.children()) {
        children.push_back(f(c));
        changed = changed || !(children.back() == c);
    }
    if (!changed)
        return e;
    return Term::op(e.operation(), std::move(children));
}

void collect_names(const Term& e, std::set<std::string>& out) {
    if (e.kind() != TermKind::op && e.kind() != TermKind::prefix)
        out.insert(e.name());
    for (const auto& c : e.children())
        collect_names(c, out);
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
    std::string root = base.substr(0, base.find('#'));
    for (std::size_t k = 0;; ++k) {
        std::string candidate = root + "#" + std::to_string(k);
        if (!avoid.contains(candidate))
            return candidate;
    }
}

// Renames the binder of `e` away from the free variables of `g` when needed,
// returning the (possibly new) binder name and body.
std::pair<std::string, Term> open_binder(const Term& e, const Term& g, std::string_view v) {
    if (!g.has_free(e.name()))
        return {e.name(), e.body()};
    std::set<std::string> avoid = all_names(e.body());
    avoid.insert(g.free_vars().begin(), g.free_vars().end());
    avoid.insert(std::string(v));
    std::string renamed = fresh_name(e.name(), avoid);
    return {renamed, substitute(e.body(), Term::var(renamed), e.name())};
}

Term substitute_impl(const Term& e, const Term& g, std::string_view v) {
    if (!e.has_free(v))
        return e;
    switch (e.kind()) {
    case TermKind::var:
        return g;
    case TermKind::op:
        return map_children(e, [&](const Term& c) { return substitute_impl(c, g, v); });
    case TermKind::prefix:
        return Term::prefix(e.name(), substitute_impl(e.body(), g, v));
    case TermKind::beta:
    case TermKind::mu: {
        auto [name, body] = open_binder(e, g, v);
        return rebuild_binder(e, std::move(name), substitute_impl(body, g, v));
    }
    }
    return e;
}

bool has_unguarded(const Term& e, std::string_view v) {
    if (!e.has_free(v))
        return false;
    switch (e.kind()) {
    case TermKind::var: return true;
    case TermKind::prefix: return false;
    default:
        return std::any_of(e.children().begin(), e.children().end(),
                           [&](const Term& c) { return has_unguarded(c, v); });
    }
}

} // namespace

std::set<std::string> all_names(const Term& e) {
    std::set<std::string> out;
    collect_names(e, out);
    return out;
}

VarAnalysis analyze(const Term& e) {
    VarAnalysis out;
    out.free.insert(e.free_vars().begin(), e.free_vars().end());
    for (const auto& name : all_names(e)) {
        if (!out.free.contains(name)) {
            out.bound.insert(name);
            out.guarded.insert(name);
        } else if (is_guarded(e, name)) {
            out.guarded.insert(name);
        }
    }
    return out;
}

bool is_guarded(const Term& e, std::string_view v) {
    return !has_unguarded(e, v);
}

Term substitute(const Term& e, const Term& g, std::string_view v) {
    return substitute_impl(e, g, v);
}

Term substitute_guarded(const Term& e, const Term& g, std::string_view v) {
    if (!e.has_free(v))
        return e;
    switch (e.kind()) {
    case TermKind::var:
        return e;
    case TermKind::op:
        return map_children(e, [&](const Term& c) { return substitute_guarded(c, g, v); });
    case TermKind::prefix:
        return Term::prefix(e.name(), substitute(e.body(), g, v));
    case TermKind::beta: {
        auto [name, body] = open_binder(e, g, v);
        return Term::beta(name, substitute_guarded(body, g, v));
    }
    case TermKind::mu: {
        auto [name, body] = open_binder(e, g, v);
        Term closed = Term::mu(name, substitute(body, g, v));
        if (!has_unguarded(body, v))
            return closed;
        // The unfolding of μx b exposes the unguarded v inside b behind the
        // prefixes of b, so those copies are substituted while the top-level
        // returns of v survive: βx (b[g//v])[μx b[g/v] // x].
        return Term::beta(name, substitute_guarded(substitute_guarded(body, g, v), closed, name));
    }
    }
    return e;
}

Term zero_unguarded(const Term& e, std::string_view v) {
    if (!e.has_free(v))
        return e;
    switch (e.kind()) {
    case TermKind::var: return Term::zero();
    case TermKind::prefix: return e;
    case TermKind::op: return map_children(e, [&](const Term& c) { return zero_unguarded(c, v); });
    case TermKind::beta:
    case TermKind::mu: return rebuild_binder(e, e.name(), zero_unguarded(e.body(), v));
    }
    return e;
}

namespace {

void closure_into(const Term& e, std::set<Term>& out) {
    switch (e.kind()) {
    case TermKind::var:
        out.insert(e);
        return;
    case TermKind::op:
    case TermKind::prefix:
        out.insert(e);
        for (const auto& c : e.children())
            closure_into(c, out);
        return;
    case TermKind::beta:
        out.insert(e);
        closure_into(zero_unguarded(e.body(), e.name()), out);
        return;
    case TermKind::mu: {
        out.insert(e);
        std::set<Term> inner;
        closure_into(zero_unguarded(e.body(), e.name()), inner);
        for (const auto& f : inner)
            out.insert(substitute(f, e, e.name()));
        return;
    }
    }
}

bool syntactic_leq_impl(const Term& lhs, const Term& rhs, const Relation& actions, const TheoryConfig& config,
                        const std::function<bool(const std::string&, const std::string&)>& var_leq) {
    if (lhs.kind() != rhs.kind())
        return false;
    switch (lhs.kind()) {
    case TermKind::var:
        return lhs.name() == rhs.name() || (var_leq && var_leq(lhs.name(), rhs.name()));
    case TermKind::op:
        if (!operation_leq(lhs.operation(), rhs.operation()) ||
            lhs.children().size() != rhs.children().size())
            return false;
        for (std::size_t i = 0; i < lhs.children().size(); ++i)
            if (!syntactic_leq_impl(lhs.children()[i], rhs.children()[i], actions, config, var_leq))
                return false;
        return true;
    case TermKind::prefix: {
        if (lhs.name() != rhs.name()) {
            auto a = config.action_index(lhs.name());
            auto b = config.action_index(rhs.name());
            if (!a || !b || !actions.test(*a, *b))
                return false;
        }
        return syntactic_leq_impl(lhs.body(), rhs.body(), actions, config, var_leq);
    }
    case TermKind::beta:
    case TermKind::mu:
        return lhs.name() == rhs.name() && syntactic_leq_impl(lhs.body(), rhs.body(), actions, config, var_leq);
    }
    return false;
}

} // namespace

std::vector<Term> closure_bound(const Term& e) {
    std::set<Term> out;
    closure_into(e, out);
    return {out.begin(), out.end()};
}

bool syntactic_leq(const Term& lhs, const Term& rhs, const TheoryConfig& config,
                   const std::function<bool(const std::string&, const std::string&)>& var_leq) {
    return syntactic_leq_impl(lhs, rhs, config.action_preorder(), config, var_leq);
}

Term instantiate(const STerm& pattern, std::span<const Term> leaves) {
    if (pattern.is_leaf()) {
        if (pattern.generator() >= leaves.size())
            throw InputError("pattern generator without an instantiation");
        return leaves[pattern.generator()];
    }
    std::vector<Term> children;
    for (const auto& c : pattern.children())
        children.push_back(instantiate(c, leaves));
    return Term::op(pattern.op(), std::move(children));
}

} // namespace opc
