#pragma once

#include "opc/automaton.hpp"
#include "opc/kernel.hpp"
#include "opc/term.hpp"

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace opc {

enum class ExprKind : std::uint8_t { zero, one, action, ret, choice, seq, loop };

/// Loop annotation. A star loop e^(σ) is the polystar loop with p(x, y) = x σ y;
/// the flag only records which surface form was used.
struct LoopPayload {
    /// Pattern over generator 0 (x, the loop body) and 1 (y, the exit).
    STerm pattern;
    bool star = false;

    static LoopPayload star_of(const Operation& op);
    static LoopPayload poly(STerm pattern);

    friend bool operator==(const LoopPayload&, const LoopPayload&) = default;
};

inline constexpr Gen loop_body_gen = 0;
inline constexpr Gen loop_exit_gen = 1;

/// Star, polystar and ProbGKAT expressions share one syntax tree:
/// 0 | 1 | a | $v | e σ f | e;f | e*{...}.
class Expr {
public:
    static Expr zero();
    static Expr one();
    static Expr action(std::string name);
    /// Return-variable constant (ProbGKAT only).
    static Expr ret(std::string name);
    static Expr choice(Operation op, Expr lhs, Expr rhs);
    static Expr seq(Expr lhs, Expr rhs);
    static Expr loop(Expr body, LoopPayload payload);

    ExprKind kind() const noexcept;
    const std::string& name() const noexcept;
    const Operation& op() const noexcept;
    const LoopPayload& payload() const noexcept;
    const Expr& lhs() const noexcept;
    const Expr& rhs() const noexcept;
    /// Body of a loop.
    const Expr& body() const noexcept { return lhs(); }
    std::size_t size() const noexcept;
    std::size_t hash() const noexcept;

    /// No polystar loops and no constants.
    bool is_star() const;
    /// No constants.
    bool is_polystar() const;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Expr make(ExprKind kind, std::string name, Operation op, LoopPayload payload, std::vector<Expr> children);
    std::shared_ptr<const Node> node_;
};

struct ExprHash {
    std::size_t operator()(const Expr& e) const noexcept { return e.hash(); }
};

/// The variable standing for successful termination in translated terms.
inline constexpr std::string_view unit_var = "_u";

/// τ for the star fragment. Throws InputError on polystar loops or constants.
Term translate_star(const Expr& e);
/// τ for the polystar fragment. Throws InputError on constants.
Term translate_polystar(const Expr& e);
/// τ extended with constants, τ($v) = v. Requires the probgkat theory;
/// constants may not use the reserved `_` prefix.
Term translate_probgkat(const Expr& e, const TheoryConfig& config);
/// Dispatches on the theory: probgkat gets constants, everything else the polystar translation.
Term translate(const Expr& e, const TheoryConfig& config);

/// "e is guarded": the unit variable is guarded in τ(e).
bool is_guarded_expr(const Expr& e);

/// Small-step semantics of expressions, over generators ✓ ⊎ Var ⊎ Act × Expr.
class PolystarCalculus {
public:
    explicit PolystarCalculus(TheoryConfig config);
    PolystarCalculus(const PolystarCalculus&) = delete;
    PolystarCalculus& operator=(const PolystarCalculus&) = delete;

    static constexpr Gen tick = 0;

    struct GenInfo {
        enum class Kind { tick, placeholder, var, pair } kind = Kind::tick;
        std::string var;
        std::size_t action = 0;
        Expr target = Expr::zero();
    };

    const TheoryConfig& config() const noexcept { return config_; }
    const Theory& theory() const noexcept { return *theory_; }
    const GenInfo& describe(Gen g) const { return gens_.at(g); }

    /// ℓ(e).
    Element step(const Expr& e);

    /// Automaton of expressions reachable from e (state 0); ✓ becomes the
    /// return variable unit_var.
    OrderedAutomaton explore(const Expr& e);

private:
    static constexpr Gen placeholder = 1;

    Gen var_gen(const std::string& name);
    Gen pair_gen(std::size_t action, const Expr& target);
    std::size_t action_of(const std::string& name) const;

    struct PairKey {
        std::size_t action;
        Expr target;
        bool operator==(const PairKey& o) const { return action == o.action && target == o.target; }
    };
    struct PairKeyHash {
        std::size_t operator()(const PairKey& k) const noexcept { return k.target.hash() * 31 + k.action; }
    };

    TheoryConfig config_;
    std::shared_ptr<const Theory> theory_;
    DiscreteOrder order_;
    std::vector<GenInfo> gens_;
    std::unordered_map<std::string, Gen> var_gens_;
    std::unordered_map<PairKey, Gen, PairKeyHash> pair_gens_;
    std::unordered_map<Expr, Element, ExprHash> steps_;
};

} // namespace opc
