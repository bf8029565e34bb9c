#include "opc/cli.hpp"

#include "opc/behaviour.hpp"
#include "opc/errors.hpp"
#include "opc/fragments.hpp"
#include "opc/semantics.hpp"
#include "opc/serialize.hpp"
#include "opc/solver.hpp"
#include "opc/syntax.hpp"
#include "selftest/suites.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace opc {

namespace {

struct ConfigOptions {
    std::string theory = "convex";
    std::string config_file;
    std::vector<std::string> atoms;
    std::vector<std::string> actions;
    std::vector<std::string> action_order;
    std::size_t max_states = Limits{}.max_states;
    std::size_t max_support = Limits{}.max_support;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// `@path` reads a file, `-` reads standard input, anything else is literal text.
std::string read_input(const std::string& arg) {
    if (arg == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    if (!arg.empty() && arg.front() == '@')
        return read_file(arg.substr(1));
    return arg;
}

void add_config_options(CLI::App& cmd, ConfigOptions& opts) {
    cmd.add_option("--theory", opts.theory, "guarded, convex, semilattice or probgkat")->capture_default_str();
    cmd.add_option("--config", opts.config_file, "TheoryConfig JSON file");
    cmd.add_option("--atoms", opts.atoms, "declared atoms")->delimiter(',')->allow_extra_args(false);
    cmd.add_option("--actions", opts.actions, "declared actions")->delimiter(',')->allow_extra_args(false);
    cmd.add_option("--action-order", opts.action_order, "action order pairs a<=b")->delimiter(',')->allow_extra_args(false);
    cmd.add_option("--max-states", opts.max_states, "reachable state cap")->capture_default_str();
    cmd.add_option("--max-support", opts.max_support, "support cap for order checks")->capture_default_str();
}

TheoryConfig build_config(const ConfigOptions& opts, const CLI::App& cmd) {
    TheoryConfig config;
    if (!opts.config_file.empty()) {
        config = config_from_json(read_file(opts.config_file));
        if (cmd.count("--theory"))
            throw InputError("--theory conflicts with --config");
    } else {
        config.theory = parse_theory_kind(opts.theory);
        config.atoms = opts.atoms;
        config.actions = opts.actions;
        config.open = true;
    }
    for (const auto& pair : opts.action_order) {
        auto sep = pair.find("<=");
        if (sep == std::string::npos)
            throw InputError("action order entries look like a<=b");
        config.action_order.emplace_back(pair.substr(0, sep), pair.substr(sep + 2));
    }
    if (cmd.count("--max-states"))
        config.limits.max_states = opts.max_states;
    if (cmd.count("--max-support"))
        config.limits.max_support = opts.max_support;
    return config;
}

/// Parses every term against one vocabulary, then closes it.
std::vector<Term> parse_terms(TheoryConfig& config, const std::vector<std::string>& inputs) {
    std::vector<Term> out;
    for (const auto& in : inputs)
        out.push_back(parse_term(read_input(in), config));
    return out;
}

std::string describe_branch(Calculus& calc, const Element& p) {
    return format_element(calc.theory(), calc.config(), p, [&](Gen g) {
        const auto& info = calc.describe(g);
        return info.is_var ? Term::var(info.var) : Term::prefix(calc.config().actions[info.action], info.target);
    });
}

std::string describe_state_branch(const OrderedAutomaton& a, std::size_t s) {
    return format_element(a.theory(), a.config(), a.branch(s), [&](Gen g) {
        auto d = a.decode(g);
        if (d.is_var)
            return Term::var(a.vars()[d.var]);
        return Term::prefix(a.config().actions[d.action], Term::var("s" + std::to_string(d.target)));
    });
}

void print_automaton(const OrderedAutomaton& a, std::ostream& out) {
    out << "theory " << to_string(a.theory().kind()) << ", " << a.size() << " states\n";
    for (std::size_t s = 0; s < a.size(); ++s) {
        out << "s" << s << ": " << a.label(s) << "\n";
        out << "  -> " << describe_state_branch(a, s) << "\n";
    }
    for (auto [x, y] : a.order().strict_pairs())
        out << "s" << x << " <= s" << y << "\n";
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app("opc: ordered process calculus toolkit", "opc");
    app.require_subcommand(1);

    std::function<int()> action;

    ConfigOptions fmt_opts;
    std::string fmt_input;
    std::string fmt_kind = "term";
    auto* fmt = app.add_subcommand("fmt", "parse and print canonically");
    add_config_options(*fmt, fmt_opts);
    fmt->add_option("--kind", fmt_kind, "term, expr or system")->check(CLI::IsMember({"term", "expr", "system"}));
    fmt->add_option("input", fmt_input, "text, @file or -")->required();
    fmt->callback([&] {
        action = [&] {
            TheoryConfig config = build_config(fmt_opts, *fmt);
            std::string text = read_input(fmt_input);
            if (fmt_kind == "term")
                out << format_term(parse_term(text, config), config) << "\n";
            else if (fmt_kind == "expr")
                out << format_expr(parse_expr(text, config), config) << "\n";
            else
                out << format_system(parse_system(text, config), config);
            return int(exit_holds);
        };
    });

    ConfigOptions step_opts;
    std::string step_input;
    auto* step = app.add_subcommand("step", "print the branch element of a term");
    add_config_options(*step, step_opts);
    step->add_option("term", step_input, "text, @file or -")->required();
    step->callback([&] {
        action = [&] {
            TheoryConfig config = build_config(step_opts, *step);
            Term e = parse_terms(config, {step_input})[0];
            Calculus calc(config);
            calc.check_term(e);
            out << describe_branch(calc, calc.step(e)) << "\n";
            return int(exit_holds);
        };
    });

    ConfigOptions explore_opts;
    std::string explore_input;
    bool explore_dot = false;
    bool explore_json = false;
    auto* explore = app.add_subcommand("explore", "build the reachable automaton of a term");
    add_config_options(*explore, explore_opts);
    explore->add_option("term", explore_input, "text, @file or -")->required();
    auto* dot_flag = explore->add_flag("--dot", explore_dot, "Graphviz output");
    explore->add_flag("--json", explore_json, "JSON output")->excludes(dot_flag);
    explore->callback([&] {
        action = [&] {
            TheoryConfig config = build_config(explore_opts, *explore);
            Term e = parse_terms(config, {explore_input})[0];
            Calculus calc(config);
            calc.check_term(e);
            OrderedAutomaton a = calc.reachable(e);
            if (explore_dot)
                out << automaton_to_dot(a);
            else if (explore_json)
                out << automaton_to_json(a) << "\n";
            else
                print_automaton(a, out);
            return int(exit_holds);
        };
    });

    struct Comparison {
        const char* name;
        const char* help;
        std::function<bool(Calculus&, const Term&, const Term&)> decide;
    };
    const std::vector<Comparison> comparisons{
        {"leq", "decide e <=_b f", behavioural_leq},
        {"equiv", "decide behavioural equivalence", behavioural_equiv},
        {"similar", "decide whether f simulates e", simulated_by},
        {"bisimilar", "decide ordinary bisimilarity", bisimilar},
    };
    std::vector<ConfigOptions> cmp_opts(comparisons.size());
    std::vector<std::array<std::string, 2>> cmp_inputs(comparisons.size());
    for (std::size_t i = 0; i < comparisons.size(); ++i) {
        auto* cmd = app.add_subcommand(comparisons[i].name, comparisons[i].help);
        add_config_options(*cmd, cmp_opts[i]);
        cmd->add_option("e", cmp_inputs[i][0], "text, @file or -")->required();
        cmd->add_option("f", cmp_inputs[i][1], "text, @file or -")->required();
        cmd->callback([&, i, cmd] {
            action = [&, i, cmd] {
                TheoryConfig config = build_config(cmp_opts[i], *cmd);
                auto terms = parse_terms(config, {cmp_inputs[i][0], cmp_inputs[i][1]});
                Calculus calc(config);
                calc.check_term(terms[0]);
                calc.check_term(terms[1]);
                bool holds = comparisons[i].decide(calc, terms[0], terms[1]);
                out << (holds ? "holds" : "does not hold") << "\n";
                return int(holds ? exit_holds : exit_fails);
            };
        });
    }

    ConfigOptions solve_opts;
    std::string solve_input;
    auto* solve = app.add_subcommand("solve", "solve a guarded system of equations");
    add_config_options(*solve, solve_opts);
    solve->add_option("system", solve_input, "system file (path or @path), or - for standard input")->required();
    solve->callback([&] {
        action = [&] {
            TheoryConfig config = build_config(solve_opts, *solve);
            std::string text = solve_input == "-" || solve_input.starts_with('@') ? read_input(solve_input)
                                                                                 : read_file(solve_input);
            EquationSystem system = parse_system(text, config);
            Calculus calc(config);
            for (const auto& rhs : system.rhs)
                calc.check_term(rhs);
            check_monotone(system, calc.config());
            auto solution = solve_guarded(system);
            for (std::size_t i = 0; i < system.size(); ++i)
                out << system.unknowns[i] << " = " << format_term(solution[i], calc.config()) << "\n";
            return int(exit_holds);
        };
    });

    ConfigOptions translate_opts;
    std::string translate_kind;
    std::string translate_input;
    auto* translate_cmd = app.add_subcommand("translate", "translate a star, polystar or probgkat expression");
    add_config_options(*translate_cmd, translate_opts);
    translate_cmd->add_option("fragment", translate_kind, "star, polystar or probgkat")
        ->required()
        ->check(CLI::IsMember({"star", "polystar", "probgkat"}));
    translate_cmd->add_option("expr", translate_input, "text, @file or -")->required();
    translate_cmd->callback([&] {
        action = [&] {
            ConfigOptions opts = translate_opts;
            if (translate_kind == "probgkat" && !translate_cmd->count("--theory"))
                opts.theory = "probgkat";
            TheoryConfig config = build_config(opts, *translate_cmd);
            Expr e = parse_expr(read_input(translate_input), config);
            Term t = translate_kind == "star"       ? translate_star(e)
                     : translate_kind == "polystar" ? translate_polystar(e)
                                                    : translate_probgkat(e, config);
            out << format_term(t, config) << "\n";
            return int(exit_holds);
        };
    });

    std::string suite;
    std::uint64_t seed = 0;
    auto* selftest_cmd = app.add_subcommand("selftest", "run the property suites");
    selftest_cmd->add_option("--suite", suite, "run only this suite")
        ->check(CLI::IsMember(selftest::suite_names()));
    selftest_cmd->add_option("--seed", seed, "random seed (default: OPC_SEED or fixed)");
    selftest_cmd->callback([&] {
        action = [&] {
            std::uint64_t s = selftest_cmd->count("--seed") ? seed : selftest::seed_from_env();
            std::vector<std::string> names = suite.empty() ? selftest::suite_names() : std::vector{suite};
            bool all = true;
            for (const auto& name : names) {
                auto result = selftest::run_suite(name, s);
                out << selftest::format_result(result) << "\n" << std::flush;
                all = all && result.passed();
            }
            return int(all ? exit_holds : exit_fails);
        };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_holds;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_holds;
    } catch (const CLI::ParseError& e) {
        err << "opc: " << e.what() << "\n";
        return exit_input;
    }

    try {
        return action();
    } catch (const ResourceError& e) {
        err << "opc: resource limit: " << e.what() << "\n";
        return exit_resource;
    } catch (const InputError& e) {
        err << "opc: " << e.what() << "\n";
        return exit_input;
    }
}

} // namespace opc
