#pragma once

#include "opc/kernel.hpp"

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace opc {

enum class TermKind : std::uint8_t { var, op, prefix, beta, mu };

struct TermNode;

/// Immutable process term, shared structurally. Equality is nominal: bound
/// names matter.
class Term {
public:
    static Term var(std::string name);
    static Term zero();
    static Term op(Operation op, std::vector<Term> children);
    static Term binary(Operation op, Term lhs, Term rhs);
    static Term prefix(std::string action, Term body);
    static Term beta(std::string var, Term body);
    static Term mu(std::string var, Term body);

    TermKind kind() const noexcept;
    /// Variable name (var), action (prefix) or bound variable (beta, mu).
    const std::string& name() const noexcept;
    const Operation& operation() const noexcept;
    std::span<const Term> children() const noexcept;
    /// The single child of prefix, beta and mu nodes.
    const Term& body() const noexcept { return children()[0]; }

    bool is_zero() const noexcept { return kind() == TermKind::op && operation().kind == OpKind::zero; }
    bool is_binder() const noexcept { return kind() == TermKind::beta || kind() == TermKind::mu; }

    /// Free variables, sorted.
    const std::vector<std::string>& free_vars() const noexcept;
    bool has_free(std::string_view v) const;
    std::size_t size() const noexcept;
    std::size_t hash() const noexcept;

    friend bool operator==(const Term& a, const Term& b);
    /// Structural total order, used for deterministic containers.
    friend bool operator<(const Term& a, const Term& b);

private:
    explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}
    static Term binder(TermKind kind, std::string var, Term body);
    std::shared_ptr<const TermNode> node_;
};

struct TermHash {
    std::size_t operator()(const Term& t) const noexcept { return t.hash(); }
};

struct VarAnalysis {
    std::set<std::string> free;
    /// Names bound by a binder or occurring, none of whose occurrences is free.
    std::set<std::string> bound;
    /// Bound names plus free names all of whose free occurrences sit under an action.
    std::set<std::string> guarded;
};

VarAnalysis analyze(const Term& e);

/// v is guarded in e: every free occurrence of v lies under an action prefix.
/// Holds vacuously when v is not free.
bool is_guarded(const Term& e, std::string_view v);

/// Every name occurring in e, free or bound, binders included.
std::set<std::string> all_names(const Term& e);

/// e[g/v], capture-avoiding. A binder whose name is free in g and whose body
/// contains v free is renamed to a fresh `name#k` first.
Term substitute(const Term& e, const Term& g, std::string_view v);

/// e[g//v]: the term whose branch element is ε(e) with g substituted for v in
/// the targets of its pairs. Occurrences of v under a prefix are replaced and
/// unguarded returns of v are kept. A μ binder whose body returns v is
/// unfolded once into a β so that the copies of v its unfolding puts behind a
/// prefix are replaced too.
Term substitute_guarded(const Term& e, const Term& g, std::string_view v);

/// e[0 unsub v]: replaces unguarded occurrences of v with 0, descending only
/// through non-prefix nodes.
Term zero_unguarded(const Term& e, std::string_view v);

/// The finite closure U(e) bounding the reachable states of e.
std::vector<Term> closure_bound(const Term& e);

/// The syntactic order ≤_exp: operation order, action order and congruence.
/// `var_leq` orders variables (equality for return variables).
bool syntactic_leq(const Term& lhs, const Term& rhs, const TheoryConfig& config,
                   const std::function<bool(const std::string&, const std::string&)>& var_leq = {});

/// Instantiates an S-term: leaf i becomes leaves[i].
Term instantiate(const STerm& pattern, std::span<const Term> leaves);

} // namespace opc
