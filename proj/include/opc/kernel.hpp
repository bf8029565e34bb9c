#pragma once

#include "opc/config.hpp"
#include "opc/rational.hpp"
#include "opc/relation.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <variant>
#include <vector>

namespace opc {

/// Generators are small integers; what they stand for is up to the owner
/// of the context (return variables, action/state pairs, ...).
using Gen = std::uint32_t;

/// The ⊥ entry of a guarded table.
inline constexpr Gen no_gen = static_cast<Gen>(-1);

/// A preorder on generators together with a membership test.
class GeneratorOrder {
public:
    virtual ~GeneratorOrder() = default;
    virtual bool contains(Gen g) const = 0;
    virtual bool leq(Gen a, Gen b) const = 0;
};

/// Every generator is in scope and only equal generators are related.
class DiscreteOrder final : public GeneratorOrder {
public:
    bool contains(Gen g) const override { return g != no_gen; }
    bool leq(Gen a, Gen b) const override { return a == b; }
};

/// Finite generator set {0, ..., n-1} with an explicit preorder.
class GeneratorContext final : public GeneratorOrder {
public:
    /// Discrete context on n generators.
    explicit GeneratorContext(std::size_t n) : order_(Relation::identity(n)) {}
    /// Throws InputError unless `preorder` is reflexive and transitive.
    explicit GeneratorContext(Relation preorder);

    std::size_t size() const noexcept { return order_.size(); }
    const Relation& preorder() const noexcept { return order_; }

    bool contains(Gen g) const override { return g < order_.size(); }
    bool leq(Gen a, Gen b) const override { return contains(a) && contains(b) && order_.test(a, b); }

private:
    Relation order_;
};

/// Bit i is set when atom i belongs to the test.
using AtomSet = std::uint64_t;

enum class OpKind : std::uint8_t { zero, guard, convex, join };

/// Operation symbol: the constant 0 or one of the binary choices.
struct Operation {
    OpKind kind = OpKind::zero;
    AtomSet test = 0;   ///< guard only
    Rational weight;    ///< convex only, in [0, 1]

    static Operation zero() { return {}; }
    static Operation guard(AtomSet b) { return {OpKind::guard, b, Rational(0)}; }
    static Operation convex(Rational r) { return {OpKind::convex, 0, std::move(r)}; }
    static Operation join() { return {OpKind::join, 0, Rational(0)}; }

    std::size_t arity() const noexcept { return kind == OpKind::zero ? 0 : 2; }

    friend bool operator==(const Operation& a, const Operation& b) {
        return a.kind == b.kind && a.test == b.test && a.weight == b.weight;
    }
    friend bool operator<(const Operation& a, const Operation& b);
};

/// The operation order. Every shipped theory orders its operations discretely,
/// so this is equality; it is the single place a richer order would go.
bool operation_leq(const Operation& lhs, const Operation& rhs);

/// Term over generator leaves, 0 and binary operation nodes.
class STerm {
public:
    STerm() : op_(Operation::zero()) {}
    static STerm leaf(Gen g);
    static STerm zero() { return STerm(); }
    static STerm node(Operation op, STerm lhs, STerm rhs);

    bool is_leaf() const noexcept { return gen_ != no_gen; }
    Gen generator() const noexcept { return gen_; }
    const Operation& op() const noexcept { return op_; }
    std::span<const STerm> children() const noexcept { return children_; }

    /// Leaf generators, sorted and deduplicated.
    std::vector<Gen> generators() const;
    std::size_t size() const;

    friend bool operator==(const STerm&, const STerm&) = default;

private:
    Gen gen_ = no_gen;
    Operation op_;
    std::vector<STerm> children_;
};

// Canonical payloads. Equality of payloads coincides with provable equality
// whenever the generator order is antisymmetric.

/// Total map from atoms to (⊥ | generator); ⊥ is no_gen.
struct GuardedPayload {
    std::vector<Gen> table;
    friend bool operator==(const GuardedPayload&, const GuardedPayload&) = default;
    friend bool operator<(const GuardedPayload& a, const GuardedPayload& b) { return a.table < b.table; }
};

/// Subdistribution: strictly positive weights, sorted by generator, mass at most one.
struct ConvexPayload {
    std::vector<std::pair<Gen, Rational>> weights;

    Rational mass() const;
    Rational at(Gen g) const;

    friend bool operator==(const ConvexPayload&, const ConvexPayload&) = default;
    friend bool operator<(const ConvexPayload& a, const ConvexPayload& b) { return a.weights < b.weights; }
};

/// Antichain of maximal elements, sorted by generator.
struct SemilatticePayload {
    std::vector<Gen> maxima;
    friend bool operator==(const SemilatticePayload&, const SemilatticePayload&) = default;
    friend bool operator<(const SemilatticePayload& a, const SemilatticePayload& b) { return a.maxima < b.maxima; }
};

/// Total map from atoms to subdistributions.
struct ProbGkatPayload {
    std::vector<ConvexPayload> table;
    friend bool operator==(const ProbGkatPayload&, const ProbGkatPayload&) = default;
    friend bool operator<(const ProbGkatPayload& a, const ProbGkatPayload& b) { return a.table < b.table; }
};

/// An element of the free ordered algebra; the alternative index is the theory.
using Element = std::variant<GuardedPayload, ConvexPayload, SemilatticePayload, ProbGkatPayload>;

using GenMap = std::function<Gen(Gen)>;
using Substitution = std::function<Element(Gen)>;
using GenRelation = std::function<bool(Gen, Gen)>;

/// One branching theory: its free algebras, their order and least fixed points.
///
/// Operations take the generator order they work over. Only the semilattice
/// theory consults it when building canonical forms (to keep maxima).
class Theory {
public:
    Theory(std::size_t atoms, Limits limits) : atoms_(atoms), limits_(limits) {}
    virtual ~Theory() = default;

    virtual TheoryKind kind() const = 0;
    std::size_t atom_count() const noexcept { return atoms_; }
    const Limits& limits() const noexcept { return limits_; }

    virtual bool admits(const Operation& op) const = 0;
    /// Shape check: right alternative, table sizes, weight invariants.
    virtual bool well_formed(const Element& p) const = 0;

    virtual Element zero() const = 0;
    virtual Element unit(Gen g) const = 0;
    /// Throws InputError on arity mismatch or an operation foreign to the theory.
    virtual Element apply(const GeneratorOrder& ord, const Operation& op, std::span<const Element> args) const = 0;
    virtual bool leq(const GeneratorOrder& ord, const Element& p, const Element& q) const = 0;
    /// Least g-fixed point. `g` is expected to be unrelated to every other
    /// generator, as return variables are.
    virtual Element lfp(Gen g, const Element& p) const = 0;
    /// Kleisli extension: every generator g of p is replaced by f(g).
    virtual Element bind(const GeneratorOrder& target, const Element& p, const Substitution& f) const = 0;
    /// Re-canonicalize after the generator order changed.
    virtual Element canonicalize(const GeneratorOrder& ord, Element p) const { (void)ord; return p; }
    /// Generators occurring in p, sorted.
    virtual std::vector<Gen> support(const Element& p) const = 0;
    /// An S-term whose normal form is p.
    virtual STerm represent(const Element& p) const = 0;
    /// Is there r over admissible generator pairs with p ⊑ r(left) and
    /// r(right) ⊑ q? `admissible` must already be closed under the order
    /// (lower on the left, higher on the right).
    virtual bool coupling_exists(const Element& p, const Element& q, const GenRelation& admissible) const = 0;

    Element evaluate(const GeneratorOrder& ord, const STerm& t, const Substitution& leaf) const;
    Element normalize(const GeneratorOrder& ord, const STerm& t) const;
    /// Functorial action M(h).
    Element rename(const GeneratorOrder& target, const Element& p, const GenMap& h) const;
    /// p[q/g].
    Element substitute(const GeneratorOrder& ord, const Element& p, Gen g, const Element& q) const;
    bool equivalent(const GeneratorOrder& ord, const Element& p, const Element& q) const {
        return leq(ord, p, q) && leq(ord, q, p);
    }

private:
    std::size_t atoms_;
    Limits limits_;
};

std::shared_ptr<const Theory> make_theory(TheoryKind kind, std::size_t atoms = 0, Limits limits = {});
std::shared_ptr<const Theory> make_theory(const TheoryConfig& config);

// Checked entry points over an explicit finite context. They reject
// generators outside the context and ill-shaped elements with InputError.

Element unit(const Theory& theory, const GeneratorContext& ctx, Gen g);
Element apply(const Theory& theory, const GeneratorContext& ctx, const Operation& op, std::span<const Element> args);
Element normalize(const Theory& theory, const GeneratorContext& ctx, const STerm& t);
bool element_leq(const Theory& theory, const GeneratorContext& ctx, const Element& p, const Element& q);
Element lfp(const Theory& theory, const GeneratorContext& ctx, Gen g, const Element& p);
/// `h[i]` is the image of generator i; h must be monotone from `from` to `to`.
Element rename(const Theory& theory, const GeneratorContext& from, const GeneratorContext& to,
               std::span<const Gen> h, const Element& p);

} // namespace opc
