#pragma once

#include "opc/config.hpp"
#include "opc/fragments.hpp"
#include "opc/kernel.hpp"
#include "opc/solver.hpp"
#include "opc/term.hpp"

#include <functional>
#include <string>
#include <string_view>

namespace opc {

// Concrete syntax.
//
//   term    := binder | unary [binop term]        binary operators nest to the right
//   binder  := ("mu" | "beta") ID "." term
//   unary   := ID "." (binder | unary) | "0" | ID | "(" term ")"
//   binop   := "+" | "+[" rational "]" | "?{" [ID {"," ID}] "}"
//
//   expr    := seq [binop expr]
//   seq     := post {";" post}
//   post    := atom {"*{" (binop | pattern) "}"}
//   atom    := "0" | "1" | ID | "$" ID | "(" expr ")"
//   pattern := ("x" | "y" | "0" | "(" pattern ")") [binop pattern]
//
// Actions and atoms must be declared in the configuration unless it is
// open, in which case unseen names are appended. Errors carry byte spans.

Term parse_term(std::string_view text, TheoryConfig& config);
std::string format_term(const Term& term, const TheoryConfig& config);

Expr parse_expr(std::string_view text, TheoryConfig& config);
std::string format_expr(const Expr& expr, const TheoryConfig& config);

/// Lines `x = term` and `x <= y`; blank lines and lines starting with `#`
/// are skipped. The order may mention indeterminates defined later.
EquationSystem parse_system(std::string_view text, TheoryConfig& config);
/// Equations in declaration order, then every strict pair of the order.
std::string format_system(const EquationSystem& system, const TheoryConfig& config);

std::string format_operation(const Operation& op, const TheoryConfig& config);

/// A branch element printed as a term: each generator is replaced by the
/// term `leaf` gives for it.
std::string format_element(const Theory& theory, const TheoryConfig& config, const Element& p,
                           const std::function<Term(Gen)>& leaf);

} // namespace opc
