#pragma once

#include "opc/relation.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace opc {

enum class TheoryKind { guarded, convex, semilattice, probgkat };

std::string_view to_string(TheoryKind kind);
/// Accepts `guarded`, `convex`, `semilattice`, `probgkat`. Throws InputError otherwise.
TheoryKind parse_theory_kind(std::string_view name);
/// Guarded and probgkat tables are indexed by atoms.
bool uses_atoms(TheoryKind kind);

struct Limits {
    std::size_t max_states = 10000;
    std::size_t max_support = 20;
};

/// Atom name appended by seal() to an open vocabulary, standing for every
/// valuation not named in the input. It is not lexable, so user text cannot
/// mention it directly.
inline constexpr std::string_view rest_atom = "#rest";

/// The theory plus the atom and action vocabularies every term is checked against.
struct TheoryConfig {
    TheoryKind theory = TheoryKind::convex;
    std::vector<std::string> atoms;
    std::vector<std::string> actions;
    std::vector<std::pair<std::string, std::string>> action_order;
    Limits limits;
    /// While open, parsing appends unseen atoms and actions instead of failing.
    bool open = false;

    std::optional<std::size_t> atom_index(std::string_view name) const;
    std::optional<std::size_t> action_index(std::string_view name) const;
    /// Index of the atom, appending it when the vocabulary is open.
    std::size_t intern_atom(std::string_view name);
    std::size_t intern_action(std::string_view name);

    /// Closes the vocabulary. For atom-indexed theories an open vocabulary
    /// also gains rest_atom, so that a test naming every seen atom still has
    /// a nonempty complement.
    void seal();

    /// Reflexive-transitive closure of action_order over `actions`.
    Relation action_preorder() const;

    /// Throws InputError when atoms/actions repeat, order pairs name unknown
    /// actions, the atom count exceeds 64, or a cap is zero.
    void validate() const;
};

} // namespace opc
