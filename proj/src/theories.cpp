#include "opc/theories.hpp"

#include "opc/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace opc {

namespace {

class WeightSum {
public:
    void add(Gen g, const Rational& w) {
        if (sgn(w) == 0)
            return;
        auto [it, inserted] = sum_.try_emplace(g, w);
        if (!inserted)
            it->second += w;
    }

    void add_scaled(const ConvexPayload& p, const Rational& factor) {
        if (sgn(factor) == 0)
            return;
        for (const auto& [g, w] : p.weights)
            add(g, w * factor);
    }

    ConvexPayload finish() && {
        ConvexPayload out;
        out.weights.reserve(sum_.size());
        for (auto& [g, w] : sum_)
            if (sgn(w) != 0)
                out.weights.emplace_back(g, std::move(w));
        return out;
    }

private:
    std::map<Gen, Rational> sum_;
};

bool convex_well_formed(const ConvexPayload& p) {
    Rational mass(0);
    for (std::size_t i = 0; i < p.weights.size(); ++i) {
        if (p.weights[i].first == no_gen || sgn(p.weights[i].second) <= 0)
            return false;
        if (i > 0 && p.weights[i - 1].first >= p.weights[i].first)
            return false;
        mass += p.weights[i].second;
    }
    return mass <= 1;
}

bool in_test(AtomSet test, std::size_t atom) {
    return ((test >> atom) & 1U) != 0;
}

void require_binary(const Operation& op, std::span<const Element> args) {
    if (args.size() != op.arity())
        throw InputError("operation expects " + std::to_string(op.arity()) + " arguments, got " +
                         std::to_string(args.size()));
}

void require_weight(const Operation& op) {
    if (op.weight < 0 || op.weight > 1)
        throw InputError("convex weight " + to_string(op.weight) + " is outside [0, 1]");
}

template <class Payload>
const Payload& as(const Element& e) {
    if (const auto* p = std::get_if<Payload>(&e))
        return *p;
    throw InputError("element belongs to a different theory");
}

// Convex payload to an S-term: a chain of ⊕ with the residual mass going to 0.
STerm represent_convex(const ConvexPayload& p) {
    const auto& w = p.weights;
    std::vector<Rational> remaining(w.size() + 1);
    remaining[0] = 1;
    for (std::size_t i = 0; i < w.size(); ++i)
        remaining[i + 1] = remaining[i] - w[i].second;
    STerm tail = STerm::zero();
    for (std::size_t k = w.size(); k-- > 0;) {
        if (k + 1 == w.size() && w[k].second == remaining[k]) {
            tail = STerm::leaf(w[k].first);
            continue;
        }
        tail = STerm::node(Operation::convex(w[k].second / remaining[k]), STerm::leaf(w[k].first), std::move(tail));
    }
    return tail;
}

// Groups atoms by payload and nests guards over the groups; atoms whose
// payload is empty fall through to 0.
template <class Payload, class IsEmpty, class Render>
STerm represent_table(const std::vector<Payload>& table, IsEmpty is_empty, Render render) {
    std::vector<std::pair<const Payload*, AtomSet>> groups;
    bool has_empty = false;
    for (std::size_t a = 0; a < table.size(); ++a) {
        if (is_empty(table[a])) {
            has_empty = true;
            continue;
        }
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return *g.first == table[a]; });
        if (it == groups.end())
            groups.emplace_back(&table[a], AtomSet{1} << a);
        else
            it->second |= AtomSet{1} << a;
    }
    if (groups.empty())
        return STerm::zero();
    STerm tail;
    std::size_t wrapped = groups.size();
    if (has_empty) {
        tail = STerm::zero();
    } else {
        tail = render(*groups.back().first);
        --wrapped;
    }
    for (std::size_t k = wrapped; k-- > 0;)
        tail = STerm::node(Operation::guard(groups[k].second), render(*groups[k].first), std::move(tail));
    return tail;
}

class GuardedTheory final : public Theory {
public:
    using Theory::Theory;

    TheoryKind kind() const override { return TheoryKind::guarded; }

    bool admits(const Operation& op) const override {
        return op.kind == OpKind::zero || (op.kind == OpKind::guard && valid_test(op.test));
    }

    bool well_formed(const Element& p) const override {
        const auto* g = std::get_if<GuardedPayload>(&p);
        return g != nullptr && g->table.size() == atom_count();
    }

    Element zero() const override { return GuardedPayload{std::vector<Gen>(atom_count(), no_gen)}; }
    Element unit(Gen g) const override { return GuardedPayload{std::vector<Gen>(atom_count(), g)}; }

    Element apply(const GeneratorOrder&, const Operation& op, std::span<const Element> args) const override {
        require_binary(op, args);
        if (op.kind == OpKind::zero)
            return zero();
        if (!admits(op))
            throw InputError("guarded theory has no such operation");
        const auto& lhs = as<GuardedPayload>(args[0]);
        const auto& rhs = as<GuardedPayload>(args[1]);
        GuardedPayload out{std::vector<Gen>(atom_count())};
        for (std::size_t a = 0; a < atom_count(); ++a)
            out.table[a] = in_test(op.test, a) ? lhs.table[a] : rhs.table[a];
        return out;
    }

    bool leq(const GeneratorOrder& ord, const Element& p, const Element& q) const override {
        const auto& lhs = as<GuardedPayload>(p);
        const auto& rhs = as<GuardedPayload>(q);
        for (std::size_t a = 0; a < atom_count(); ++a) {
            if (lhs.table[a] == no_gen)
                continue;
            if (rhs.table[a] == no_gen || !ord.leq(lhs.table[a], rhs.table[a]))
                return false;
        }
        return true;
    }

    Element lfp(Gen g, const Element& p) const override { return guarded_lfp(g, as<GuardedPayload>(p)); }

    Element bind(const GeneratorOrder&, const Element& p, const Substitution& f) const override {
        const auto& table = as<GuardedPayload>(p).table;
        GuardedPayload out{std::vector<Gen>(atom_count(), no_gen)};
        std::map<Gen, GuardedPayload> images;
        for (std::size_t a = 0; a < atom_count(); ++a) {
            Gen g = table[a];
            if (g == no_gen)
                continue;
            auto it = images.find(g);
            if (it == images.end())
                it = images.emplace(g, as<GuardedPayload>(f(g))).first;
            out.table[a] = it->second.table[a];
        }
        return out;
    }

    std::vector<Gen> support(const Element& p) const override {
        std::vector<Gen> out;
        for (Gen g : as<GuardedPayload>(p).table)
            if (g != no_gen)
                out.push_back(g);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    STerm represent(const Element& p) const override {
        return represent_table(
            as<GuardedPayload>(p).table, [](Gen g) { return g == no_gen; }, [](Gen g) { return STerm::leaf(g); });
    }

    bool coupling_exists(const Element& p, const Element& q, const GenRelation& admissible) const override {
        const auto& lhs = as<GuardedPayload>(p);
        const auto& rhs = as<GuardedPayload>(q);
        for (std::size_t a = 0; a < atom_count(); ++a) {
            if (lhs.table[a] == no_gen)
                continue;
            if (rhs.table[a] == no_gen || !admissible(lhs.table[a], rhs.table[a]))
                return false;
        }
        return true;
    }

private:
    bool valid_test(AtomSet test) const {
        return atom_count() >= 64 || (test >> atom_count()) == 0;
    }
};

class ConvexTheory final : public Theory {
public:
    using Theory::Theory;

    TheoryKind kind() const override { return TheoryKind::convex; }

    bool admits(const Operation& op) const override {
        return op.kind == OpKind::zero || (op.kind == OpKind::convex && op.weight >= 0 && op.weight <= 1);
    }

    bool well_formed(const Element& p) const override {
        const auto* c = std::get_if<ConvexPayload>(&p);
        return c != nullptr && convex_well_formed(*c);
    }

    Element zero() const override { return ConvexPayload{}; }
    Element unit(Gen g) const override { return ConvexPayload{{{g, Rational(1)}}}; }

    Element apply(const GeneratorOrder&, const Operation& op, std::span<const Element> args) const override {
        require_binary(op, args);
        if (op.kind == OpKind::zero)
            return zero();
        if (op.kind != OpKind::convex)
            throw InputError("convex theory has no such operation");
        require_weight(op);
        return convex_combine(op.weight, as<ConvexPayload>(args[0]), as<ConvexPayload>(args[1]));
    }

    bool leq(const GeneratorOrder& ord, const Element& p, const Element& q) const override {
        return convex_hh_leq(ord, as<ConvexPayload>(p), as<ConvexPayload>(q), limits().max_support);
    }

    Element lfp(Gen g, const Element& p) const override { return convex_lfp(g, as<ConvexPayload>(p)); }

    Element bind(const GeneratorOrder&, const Element& p, const Substitution& f) const override {
        WeightSum sum;
        for (const auto& [g, w] : as<ConvexPayload>(p).weights)
            sum.add_scaled(as<ConvexPayload>(f(g)), w);
        return std::move(sum).finish();
    }

    std::vector<Gen> support(const Element& p) const override {
        std::vector<Gen> out;
        for (const auto& [g, w] : as<ConvexPayload>(p).weights)
            out.push_back(g);
        return out;
    }

    STerm represent(const Element& p) const override { return represent_convex(as<ConvexPayload>(p)); }

    bool coupling_exists(const Element& p, const Element& q, const GenRelation& admissible) const override {
        return transport_feasible(as<ConvexPayload>(p), as<ConvexPayload>(q), admissible);
    }
};

class SemilatticeTheory final : public Theory {
public:
    using Theory::Theory;

    TheoryKind kind() const override { return TheoryKind::semilattice; }

    bool admits(const Operation& op) const override {
        return op.kind == OpKind::zero || op.kind == OpKind::join;
    }

    bool well_formed(const Element& p) const override {
        const auto* s = std::get_if<SemilatticePayload>(&p);
        return s != nullptr && std::is_sorted(s->maxima.begin(), s->maxima.end()) &&
               std::adjacent_find(s->maxima.begin(), s->maxima.end()) == s->maxima.end();
    }

    Element zero() const override { return SemilatticePayload{}; }
    Element unit(Gen g) const override { return SemilatticePayload{{g}}; }

    Element apply(const GeneratorOrder& ord, const Operation& op, std::span<const Element> args) const override {
        require_binary(op, args);
        if (op.kind == OpKind::zero)
            return zero();
        if (op.kind != OpKind::join)
            throw InputError("semilattice theory has no such operation");
        std::vector<Gen> gens = as<SemilatticePayload>(args[0]).maxima;
        const auto& rhs = as<SemilatticePayload>(args[1]).maxima;
        gens.insert(gens.end(), rhs.begin(), rhs.end());
        return semilattice_canonical(ord, std::move(gens));
    }

    bool leq(const GeneratorOrder& ord, const Element& p, const Element& q) const override {
        return semilattice_leq(ord, as<SemilatticePayload>(p), as<SemilatticePayload>(q));
    }

    Element lfp(Gen g, const Element& p) const override {
        SemilatticePayload out = as<SemilatticePayload>(p);
        out.maxima.erase(std::remove(out.maxima.begin(), out.maxima.end(), g), out.maxima.end());
        return out;
    }

    Element bind(const GeneratorOrder& target, const Element& p, const Substitution& f) const override {
        std::vector<Gen> gens;
        for (Gen g : as<SemilatticePayload>(p).maxima) {
            Element image = f(g);
            const auto& maxima = as<SemilatticePayload>(image).maxima;
            gens.insert(gens.end(), maxima.begin(), maxima.end());
        }
        return semilattice_canonical(target, std::move(gens));
    }

    Element canonicalize(const GeneratorOrder& ord, Element p) const override {
        return semilattice_canonical(ord, std::move(std::get<SemilatticePayload>(p).maxima));
    }

    std::vector<Gen> support(const Element& p) const override { return as<SemilatticePayload>(p).maxima; }

    STerm represent(const Element& p) const override {
        const auto& gens = as<SemilatticePayload>(p).maxima;
        if (gens.empty())
            return STerm::zero();
        STerm tail = STerm::leaf(gens.back());
        for (std::size_t k = gens.size() - 1; k-- > 0;)
            tail = STerm::node(Operation::join(), STerm::leaf(gens[k]), std::move(tail));
        return tail;
    }

    bool coupling_exists(const Element& p, const Element& q, const GenRelation& admissible) const override {
        const auto& rhs = as<SemilatticePayload>(q).maxima;
        for (Gen g : as<SemilatticePayload>(p).maxima)
            if (std::none_of(rhs.begin(), rhs.end(), [&](Gen h) { return admissible(g, h); }))
                return false;
        return true;
    }
};

class ProbGkatTheory final : public Theory {
public:
    using Theory::Theory;

    TheoryKind kind() const override { return TheoryKind::probgkat; }

    bool admits(const Operation& op) const override {
        switch (op.kind) {
        case OpKind::zero: return true;
        case OpKind::guard: return atom_count() >= 64 || (op.test >> atom_count()) == 0;
        case OpKind::convex: return op.weight >= 0 && op.weight <= 1;
        case OpKind::join: return false;
        }
        return false;
    }

    bool well_formed(const Element& p) const override {
        const auto* t = std::get_if<ProbGkatPayload>(&p);
        return t != nullptr && t->table.size() == atom_count() &&
               std::all_of(t->table.begin(), t->table.end(), convex_well_formed);
    }

    Element zero() const override { return ProbGkatPayload{std::vector<ConvexPayload>(atom_count())}; }
    Element unit(Gen g) const override {
        return ProbGkatPayload{std::vector<ConvexPayload>(atom_count(), ConvexPayload{{{g, Rational(1)}}})};
    }

    Element apply(const GeneratorOrder&, const Operation& op, std::span<const Element> args) const override {
        require_binary(op, args);
        if (op.kind == OpKind::zero)
            return zero();
        if (!admits(op))
            throw InputError("probgkat theory has no such operation");
        const auto& lhs = as<ProbGkatPayload>(args[0]).table;
        const auto& rhs = as<ProbGkatPayload>(args[1]).table;
        ProbGkatPayload out{std::vector<ConvexPayload>(atom_count())};
        for (std::size_t a = 0; a < atom_count(); ++a) {
            if (op.kind == OpKind::guard)
                out.table[a] = in_test(op.test, a) ? lhs[a] : rhs[a];
            else
                out.table[a] = convex_combine(op.weight, lhs[a], rhs[a]);
        }
        return out;
    }

    bool leq(const GeneratorOrder& ord, const Element& p, const Element& q) const override {
        const auto& lhs = as<ProbGkatPayload>(p).table;
        const auto& rhs = as<ProbGkatPayload>(q).table;
        for (std::size_t a = 0; a < atom_count(); ++a)
            if (!convex_hh_leq(ord, lhs[a], rhs[a], limits().max_support))
                return false;
        return true;
    }

    Element lfp(Gen g, const Element& p) const override { return probgkat_lfp(g, as<ProbGkatPayload>(p)); }

    Element bind(const GeneratorOrder&, const Element& p, const Substitution& f) const override {
        const auto& table = as<ProbGkatPayload>(p).table;
        std::map<Gen, ProbGkatPayload> images;
        for (const auto& row : table)
            for (const auto& [g, w] : row.weights)
                if (!images.contains(g))
                    images.emplace(g, as<ProbGkatPayload>(f(g)));
        ProbGkatPayload out{std::vector<ConvexPayload>(atom_count())};
        for (std::size_t a = 0; a < atom_count(); ++a) {
            WeightSum sum;
            for (const auto& [g, w] : table[a].weights)
                sum.add_scaled(images.at(g).table[a], w);
            out.table[a] = std::move(sum).finish();
        }
        return out;
    }

    std::vector<Gen> support(const Element& p) const override {
        std::vector<Gen> out;
        for (const auto& row : as<ProbGkatPayload>(p).table)
            for (const auto& [g, w] : row.weights)
                out.push_back(g);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    STerm represent(const Element& p) const override {
        return represent_table(
            as<ProbGkatPayload>(p).table, [](const ConvexPayload& c) { return c.weights.empty(); },
            represent_convex);
    }

    bool coupling_exists(const Element& p, const Element& q, const GenRelation& admissible) const override {
        const auto& lhs = as<ProbGkatPayload>(p).table;
        const auto& rhs = as<ProbGkatPayload>(q).table;
        for (std::size_t a = 0; a < atom_count(); ++a)
            if (!transport_feasible(lhs[a], rhs[a], admissible))
                return false;
        return true;
    }
};

} // namespace

GuardedPayload guarded_lfp(Gen g, const GuardedPayload& p) {
    GuardedPayload out = p;
    std::replace(out.table.begin(), out.table.end(), g, no_gen);
    return out;
}

ConvexPayload convex_combine(const Rational& r, const ConvexPayload& lhs, const ConvexPayload& rhs) {
    WeightSum sum;
    sum.add_scaled(lhs, r);
    sum.add_scaled(rhs, Rational(1 - r));
    return std::move(sum).finish();
}

ConvexPayload convex_lfp(Gen g, const ConvexPayload& p) {
    Rational loop = p.at(g);
    if (sgn(loop) == 0)
        return p;
    if (loop == 1)
        return {};
    Rational scale = 1 / (1 - loop);
    ConvexPayload out;
    for (const auto& [h, w] : p.weights)
        if (h != g)
            out.weights.emplace_back(h, w * scale);
    return out;
}

bool convex_hh_leq(const GeneratorOrder& ord, const ConvexPayload& lhs, const ConvexPayload& rhs,
                   std::size_t max_support) {
    if (lhs.weights.empty())
        return true;
    std::vector<Gen> gens;
    for (const auto& [g, w] : lhs.weights)
        gens.push_back(g);
    for (const auto& [g, w] : rhs.weights)
        gens.push_back(g);
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    if (gens.size() > max_support)
        throw ResourceError("support of size " + std::to_string(gens.size()) + " exceeds the cap of " +
                            std::to_string(max_support));
    const std::size_t k = gens.size();
    // surplus[i] = θ₂(g_i) - θ₁(g_i); a violating upset has negative total surplus.
    std::vector<Rational> surplus(k);
    bool related = false;
    std::vector<std::vector<bool>> below(k, std::vector<bool>(k));
    for (std::size_t i = 0; i < k; ++i) {
        surplus[i] = rhs.at(gens[i]) - lhs.at(gens[i]);
        for (std::size_t j = 0; j < k; ++j) {
            below[i][j] = i == j || ord.leq(gens[i], gens[j]);
            related = related || (i != j && below[i][j]);
        }
    }
    if (!related)
        return std::all_of(surplus.begin(), surplus.end(), [](const Rational& s) { return sgn(s) >= 0; });

    // Depth-first enumeration of upsets. `state` is -1 undecided, 0 out, 1 in.
    // A branch is cut when even adding every undecided negative surplus
    // cannot push the running total below zero.
    std::vector<signed char> state(k, -1);
    auto search = [&](auto&& self, std::size_t i, const Rational& total) -> bool {
        Rational optimistic = total;
        for (std::size_t j = i; j < k; ++j)
            if (state[j] < 0 && sgn(surplus[j]) < 0)
                optimistic += surplus[j];
        if (sgn(optimistic) >= 0)
            return false;
        while (i < k && state[i] >= 0)
            ++i;
        if (i == k)
            return sgn(total) < 0;
        auto saved = state;
        // Include g_i together with everything above it.
        bool consistent = true;
        Rational with = total;
        for (std::size_t j = 0; j < k && consistent; ++j) {
            if (!below[i][j])
                continue;
            if (state[j] == 0)
                consistent = false;
            else if (state[j] < 0) {
                state[j] = 1;
                with += surplus[j];
            }
        }
        if (consistent && self(self, i + 1, with))
            return true;
        state = saved;
        // Exclude g_i together with everything below it.
        consistent = true;
        Rational without = total;
        for (std::size_t j = 0; j < k && consistent; ++j) {
            if (!below[j][i])
                continue;
            if (state[j] == 1)
                consistent = false;
            else if (state[j] < 0)
                state[j] = 0;
        }
        bool found = consistent && self(self, i + 1, without);
        state = saved;
        return found;
    };
    return !search(search, 0, Rational(0));
}

bool semilattice_leq(const GeneratorOrder& ord, const SemilatticePayload& lhs, const SemilatticePayload& rhs) {
    for (Gen g : lhs.maxima)
        if (std::none_of(rhs.maxima.begin(), rhs.maxima.end(), [&](Gen h) { return ord.leq(g, h); }))
            return false;
    return true;
}

SemilatticePayload semilattice_canonical(const GeneratorOrder& ord, std::vector<Gen> gens) {
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    SemilatticePayload out;
    for (Gen g : gens) {
        bool dominated = std::any_of(gens.begin(), gens.end(), [&](Gen h) {
            if (h == g || !ord.leq(g, h))
                return false;
            return !ord.leq(h, g) || h < g;
        });
        if (!dominated)
            out.maxima.push_back(g);
    }
    return out;
}

ProbGkatPayload probgkat_lfp(Gen g, const ProbGkatPayload& p) {
    ProbGkatPayload out;
    out.table.reserve(p.table.size());
    for (const auto& row : p.table)
        out.table.push_back(convex_lfp(g, row));
    return out;
}

bool transport_feasible(const ConvexPayload& supply, const ConvexPayload& capacity, const GenRelation& admissible) {
    const Rational demand = supply.mass();
    if (sgn(demand) == 0)
        return true;
    if (capacity.mass() < demand)
        return false;
    // Nodes: source, supply generators, capacity generators, sink.
    const std::size_t left = supply.weights.size();
    const std::size_t right = capacity.weights.size();
    const std::size_t source = 0;
    const std::size_t sink = left + right + 1;
    const std::size_t n = sink + 1;
    std::vector<std::vector<Rational>> residual(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < left; ++i) {
        residual[source][1 + i] = supply.weights[i].second;
        for (std::size_t j = 0; j < right; ++j)
            if (admissible(supply.weights[i].first, capacity.weights[j].first))
                residual[1 + i][1 + left + j] = demand;
    }
    for (std::size_t j = 0; j < right; ++j)
        residual[1 + left + j][sink] = capacity.weights[j].second;

    Rational flow(0);
    while (flow < demand) {
        std::vector<std::size_t> parent(n, n);
        parent[source] = source;
        std::deque<std::size_t> queue{source};
        while (!queue.empty() && parent[sink] == n) {
            std::size_t u = queue.front();
            queue.pop_front();
            for (std::size_t v = 0; v < n; ++v)
                if (parent[v] == n && sgn(residual[u][v]) > 0) {
                    parent[v] = u;
                    queue.push_back(v);
                }
        }
        if (parent[sink] == n)
            break;
        Rational bottleneck = demand - flow;
        for (std::size_t v = sink; v != source; v = parent[v])
            bottleneck = std::min(bottleneck, residual[parent[v]][v]);
        for (std::size_t v = sink; v != source; v = parent[v]) {
            residual[parent[v]][v] -= bottleneck;
            residual[v][parent[v]] += bottleneck;
        }
        flow += bottleneck;
    }
    return flow == demand;
}

std::shared_ptr<const Theory> make_theory(TheoryKind kind, std::size_t atoms, Limits limits) {
    if (uses_atoms(kind) && atoms == 0)
        throw InputError("theory '" + std::string(to_string(kind)) + "' needs at least one atom");
    if (atoms > 64)
        throw InputError("at most 64 atoms are supported");
    switch (kind) {
    case TheoryKind::guarded: return std::make_shared<GuardedTheory>(atoms, limits);
    case TheoryKind::convex: return std::make_shared<ConvexTheory>(0, limits);
    case TheoryKind::semilattice: return std::make_shared<SemilatticeTheory>(0, limits);
    case TheoryKind::probgkat: return std::make_shared<ProbGkatTheory>(atoms, limits);
    }
    throw InputError("unknown theory");
}

std::shared_ptr<const Theory> make_theory(const TheoryConfig& config) {
    return make_theory(config.theory, uses_atoms(config.theory) ? config.atoms.size() : 0, config.limits);
}

} // namespace opc
