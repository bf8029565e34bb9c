#include "opc/serialize.hpp"

#include "opc/errors.hpp"
#include "opc/rational.hpp"

#include <json.hpp>

#include <map>
#include <sstream>

namespace opc {

using json = nlohmann::json;

namespace {

json gen_to_json(const OrderedAutomaton& a, Gen g) {
    auto d = a.decode(g);
    if (d.is_var)
        return {{"var", a.vars()[d.var]}};
    return {{"act", a.config().actions[d.action]}, {"to", d.target}};
}

json convex_to_json(const OrderedAutomaton& a, const ConvexPayload& p) {
    json out = json::array();
    for (const auto& [g, w] : p.weights)
        out.push_back({{"gen", gen_to_json(a, g)}, {"weight", to_fraction_string(w)}});
    return out;
}

json branch_to_json(const OrderedAutomaton& a, const Element& p) {
    const auto& atoms = a.config().atoms;
    switch (a.theory().kind()) {
    case TheoryKind::guarded: {
        json out = json::object();
        const auto& table = std::get<GuardedPayload>(p).table;
        for (std::size_t i = 0; i < table.size(); ++i)
            out[atoms[i]] = table[i] == no_gen ? json(nullptr) : gen_to_json(a, table[i]);
        return out;
    }
    case TheoryKind::convex: return convex_to_json(a, std::get<ConvexPayload>(p));
    case TheoryKind::semilattice: {
        json out = json::array();
        for (Gen g : std::get<SemilatticePayload>(p).maxima)
            out.push_back(gen_to_json(a, g));
        return out;
    }
    case TheoryKind::probgkat: {
        json out = json::object();
        const auto& table = std::get<ProbGkatPayload>(p).table;
        for (std::size_t i = 0; i < table.size(); ++i)
            out[atoms[i]] = convex_to_json(a, table[i]);
        return out;
    }
    }
    return nullptr;
}

json pairs_to_json(const Relation& r, const std::function<json(std::size_t)>& name) {
    json out = json::array();
    for (auto [x, y] : r.strict_pairs())
        out.push_back(json::array({name(x), name(y)}));
    return out;
}

json config_json(const TheoryConfig& config) {
    json out;
    out["theory"] = std::string(to_string(config.theory));
    out["atoms"] = config.atoms;
    out["actions"] = config.actions;
    json order = json::array();
    for (const auto& [lo, hi] : config.action_order)
        order.push_back(json::array({lo, hi}));
    out["action_order"] = order;
    return out;
}

template <class T>
T field(const json& j, const char* key) {
    if (!j.contains(key))
        throw InputError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InputError(std::string("field '") + key + "' has the wrong type");
    }
}

TheoryConfig read_config(const json& j) {
    if (!j.is_object())
        throw InputError("configuration must be a JSON object");
    TheoryConfig config;
    config.theory = parse_theory_kind(field<std::string>(j, "theory"));
    if (j.contains("atoms"))
        config.atoms = field<std::vector<std::string>>(j, "atoms");
    if (j.contains("actions"))
        config.actions = field<std::vector<std::string>>(j, "actions");
    if (j.contains("action_order"))
        for (const auto& pair : field<std::vector<std::vector<std::string>>>(j, "action_order")) {
            if (pair.size() != 2)
                throw InputError("action_order entries must be pairs");
            config.action_order.emplace_back(pair[0], pair[1]);
        }
    if (j.contains("max_states"))
        config.limits.max_states = field<std::size_t>(j, "max_states");
    if (j.contains("max_support"))
        config.limits.max_support = field<std::size_t>(j, "max_support");
    if (j.contains("open"))
        config.open = field<bool>(j, "open");
    return config;
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

class BranchReader {
public:
    explicit BranchReader(const OrderedAutomaton& a) : a_(a) {}

    Gen gen(const json& j) const {
        if (!j.is_object())
            throw InputError("generator must be an object");
        if (j.contains("var")) {
            auto v = a_.var_index(field<std::string>(j, "var"));
            if (!v)
                throw InputError("generator names an undeclared variable");
            return a_.var_gen(*v);
        }
        auto act = a_.config().action_index(field<std::string>(j, "act"));
        if (!act)
            throw InputError("generator names an undeclared action");
        auto to = field<std::size_t>(j, "to");
        if (to >= a_.size())
            throw InputError("generator names a state out of range");
        return a_.pair_gen(*act, to);
    }

    ConvexPayload convex(const json& j) const {
        if (!j.is_array())
            throw InputError("subdistribution must be an array");
        std::map<Gen, Rational> weights;
        for (const auto& entry : j) {
            Rational w = parse_rational(field<std::string>(entry, "weight"));
            if (w <= 0)
                throw InputError("weights must be positive");
            weights[gen(entry.at("gen"))] += w;
        }
        ConvexPayload out;
        for (auto& [g, w] : weights)
            out.weights.emplace_back(g, std::move(w));
        if (out.mass() > 1)
            throw InputError("subdistribution has mass above one");
        return out;
    }

    Element branch(const json& j) const {
        const auto& atoms = a_.config().atoms;
        switch (a_.theory().kind()) {
        case TheoryKind::guarded: {
            GuardedPayload out{std::vector<Gen>(atoms.size(), no_gen)};
            for (std::size_t i = 0; i < atoms.size(); ++i) {
                if (!j.is_object() || !j.contains(atoms[i]))
                    throw InputError("guarded branch misses atom '" + atoms[i] + "'");
                if (!j.at(atoms[i]).is_null())
                    out.table[i] = gen(j.at(atoms[i]));
            }
            return out;
        }
        case TheoryKind::convex: return convex(j);
        case TheoryKind::semilattice: {
            if (!j.is_array())
                throw InputError("semilattice branch must be an array");
            SemilatticePayload out;
            for (const auto& g : j)
                out.maxima.push_back(gen(g));
            std::sort(out.maxima.begin(), out.maxima.end());
            out.maxima.erase(std::unique(out.maxima.begin(), out.maxima.end()), out.maxima.end());
            return out;
        }
        case TheoryKind::probgkat: {
            ProbGkatPayload out;
            for (const auto& atom : atoms) {
                if (!j.is_object() || !j.contains(atom))
                    throw InputError("probgkat branch misses atom '" + atom + "'");
                out.table.push_back(convex(j.at(atom)));
            }
            return out;
        }
        }
        throw InputError("unknown theory");
    }

private:
    const OrderedAutomaton& a_;
};

std::string dot_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

} // namespace

std::string automaton_to_json(const OrderedAutomaton& a) {
    json out = config_json(a.config());
    out["format_version"] = format_version;
    out["vars"] = a.vars();
    out["var_order"] = pairs_to_json(a.var_order(), [&](std::size_t v) { return json(a.vars()[v]); });
    out["order"] = pairs_to_json(a.order(), [](std::size_t s) { return json(s); });
    json states = json::array();
    for (std::size_t s = 0; s < a.size(); ++s)
        states.push_back({{"label", a.label(s)}, {"branch", branch_to_json(a, a.branch(s))}});
    out["states"] = states;
    return out.dump(2);
}

OrderedAutomaton automaton_from_json(std::string_view text) {
    json j = parse_json(text);
    if (!j.is_object())
        throw InputError("automaton must be a JSON object");
    if (field<int>(j, "format_version") != format_version)
        throw InputError("unsupported format_version");
    TheoryConfig config = read_config(j);
    config.validate();
    auto states = field<std::vector<json>>(j, "states");
    OrderedAutomaton out(config, field<std::vector<std::string>>(j, "vars"), states.size());

    Relation var_order = Relation::identity(out.vars().size());
    for (const auto& pair : field<std::vector<std::vector<std::string>>>(j, "var_order")) {
        auto lo = pair.size() == 2 ? out.var_index(pair[0]) : std::nullopt;
        auto hi = pair.size() == 2 ? out.var_index(pair[1]) : std::nullopt;
        if (!lo || !hi)
            throw InputError("var_order entries must be pairs of declared variables");
        var_order.set(*lo, *hi);
    }
    out.set_var_order(std::move(var_order));

    Relation order = Relation::identity(out.size());
    for (const auto& pair : field<std::vector<std::vector<std::size_t>>>(j, "order")) {
        if (pair.size() != 2 || pair[0] >= out.size() || pair[1] >= out.size())
            throw InputError("order entries must be pairs of state indices");
        order.set(pair[0], pair[1]);
    }
    out.set_order(std::move(order));

    BranchReader reader(out);
    for (std::size_t s = 0; s < states.size(); ++s) {
        out.set_branch(s, reader.branch(states[s].at("branch")));
        if (states[s].contains("label"))
            out.set_label(s, field<std::string>(states[s], "label"));
    }
    out.validate();
    return out;
}

std::string automaton_to_dot(const OrderedAutomaton& a) {
    std::ostringstream out;
    const auto& config = a.config();
    out << "digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n";
    for (std::size_t s = 0; s < a.size(); ++s) {
        out << "  s" << s << " [label=\"" << s;
        if (!a.label(s).empty())
            out << ": " << dot_escape(a.label(s));
        out << "\"];\n";
    }
    for (std::size_t v = 0; v < a.vars().size(); ++v)
        out << "  r" << v << " [shape=doublecircle, label=\"" << dot_escape(a.vars()[v]) << "\"];\n";

    auto edge = [&](std::size_t from, Gen g, const std::string& prefix) {
        auto d = a.decode(g);
        out << "  s" << from << " -> " << (d.is_var ? "r" : "s") << (d.is_var ? d.var : d.target) << " [label=\"";
        std::string label = prefix;
        if (!d.is_var)
            label += (label.empty() ? "" : " | ") + config.actions[d.action];
        out << dot_escape(label) << "\"];\n";
    };
    auto guarded_edges = [&](std::size_t s, const std::vector<Gen>& table) {
        std::map<Gen, std::string> atoms;
        for (std::size_t i = 0; i < table.size(); ++i)
            if (table[i] != no_gen)
                atoms[table[i]] += (atoms[table[i]].empty() ? "" : ",") + config.atoms[i];
        for (const auto& [g, names] : atoms)
            edge(s, g, names);
    };

    for (std::size_t s = 0; s < a.size(); ++s) {
        const Element& p = a.branch(s);
        switch (a.theory().kind()) {
        case TheoryKind::guarded: guarded_edges(s, std::get<GuardedPayload>(p).table); break;
        case TheoryKind::convex:
            for (const auto& [g, w] : std::get<ConvexPayload>(p).weights)
                edge(s, g, to_string(w));
            break;
        case TheoryKind::semilattice:
            for (Gen g : std::get<SemilatticePayload>(p).maxima)
                edge(s, g, "");
            break;
        case TheoryKind::probgkat: {
            const auto& table = std::get<ProbGkatPayload>(p).table;
            for (std::size_t i = 0; i < table.size(); ++i)
                for (const auto& [g, w] : table[i].weights)
                    edge(s, g, config.atoms[i] + ", " + to_string(w));
            break;
        }
        }
    }
    for (auto [x, y] : a.order().strict_pairs())
        out << "  s" << x << " -> s" << y << " [style=dashed, arrowhead=none, label=\"<=\"];\n";
    out << "}\n";
    return out.str();
}

TheoryConfig config_from_json(std::string_view text) {
    TheoryConfig config = read_config(parse_json(text));
    config.validate();
    return config;
}

std::string config_to_json(const TheoryConfig& config) {
    json out = config_json(config);
    out["max_states"] = config.limits.max_states;
    out["max_support"] = config.limits.max_support;
    return out.dump(2);
}

} // namespace opc
