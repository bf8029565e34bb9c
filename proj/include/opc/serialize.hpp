#pragma once

#include "opc/automaton.hpp"
#include "opc/config.hpp"

#include <string>
#include <string_view>

namespace opc {

inline constexpr int format_version = 1;

/// Deterministic JSON: sorted keys, states in index order, rationals as "n/d".
std::string automaton_to_json(const OrderedAutomaton& a);
/// Inverse of automaton_to_json. Throws InputError on malformed documents.
OrderedAutomaton automaton_from_json(std::string_view text);

/// Graphviz rendering: transitions labelled `α | a` (or weights / plain
/// actions), returns as double circles, the declared order as dashed edges.
std::string automaton_to_dot(const OrderedAutomaton& a);

/// {"theory", "atoms", "actions", "action_order", "max_states", "max_support"}.
TheoryConfig config_from_json(std::string_view text);
std::string config_to_json(const TheoryConfig& config);

} // namespace opc
