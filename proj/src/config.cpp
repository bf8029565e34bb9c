#include "opc/config.hpp"

#include "opc/errors.hpp"

#include <algorithm>
#include <set>

namespace opc {

std::string_view to_string(TheoryKind kind) {
    switch (kind) {
    case TheoryKind::guarded: return "guarded";
    case TheoryKind::convex: return "convex";
    case TheoryKind::semilattice: return "semilattice";
    case TheoryKind::probgkat: return "probgkat";
    }
    return "?";
}

TheoryKind parse_theory_kind(std::string_view name) {
    for (auto kind : {TheoryKind::guarded, TheoryKind::convex, TheoryKind::semilattice, TheoryKind::probgkat})
        if (to_string(kind) == name)
            return kind;
    throw InputError("unknown theory '" + std::string(name) + "'");
}

bool uses_atoms(TheoryKind kind) {
    return kind == TheoryKind::guarded || kind == TheoryKind::probgkat;
}

namespace {

std::optional<std::size_t> find_name(const std::vector<std::string>& names, std::string_view name) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
}

} // namespace

std::optional<std::size_t> TheoryConfig::atom_index(std::string_view name) const {
    return find_name(atoms, name);
}

std::optional<std::size_t> TheoryConfig::action_index(std::string_view name) const {
    return find_name(actions, name);
}

std::size_t TheoryConfig::intern_atom(std::string_view name) {
    if (auto i = atom_index(name))
        return *i;
    if (!open)
        throw InputError("unknown atom '" + std::string(name) + "'");
    if (atoms.size() >= 63)
        throw InputError("too many atoms (at most 64 including the rest atom)");
    atoms.emplace_back(name);
    return atoms.size() - 1;
}

std::size_t TheoryConfig::intern_action(std::string_view name) {
    if (auto i = action_index(name))
        return *i;
    if (!open)
        throw InputError("unknown action '" + std::string(name) + "'");
    actions.emplace_back(name);
    return actions.size() - 1;
}

void TheoryConfig::seal() {
    if (open && uses_atoms(theory) && !atom_index(rest_atom))
        atoms.emplace_back(rest_atom);
    open = false;
}

Relation TheoryConfig::action_preorder() const {
    Relation r(actions.size());
    for (const auto& [lo, hi] : action_order) {
        auto i = action_index(lo);
        auto j = action_index(hi);
        if (!i || !j)
            throw InputError("action order mentions an undeclared action: " + lo + " <= " + hi);
        r.set(*i, *j);
    }
    r.close_preorder();
    return r;
}

void TheoryConfig::validate() const {
    if (std::set<std::string>(atoms.begin(), atoms.end()).size() != atoms.size())
        throw InputError("duplicate atom name");
    if (std::set<std::string>(actions.begin(), actions.end()).size() != actions.size())
        throw InputError("duplicate action name");
    if (atoms.size() > 64)
        throw InputError("at most 64 atoms are supported");
    if (uses_atoms(theory) && atoms.empty() && !open)
        throw InputError("theory '" + std::string(to_string(theory)) + "' needs at least one atom");
    if (limits.max_states == 0 || limits.max_support == 0)
        throw InputError("resource caps must be positive");
    (void)action_preorder();
}

} // namespace opc
