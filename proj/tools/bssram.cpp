// Command-line front end: run, search, encode, validate.
//
// Exit status: 0 halted or accepted, 2 budget spent, 1 any error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bssram/encodings.hpp"
#include "bssram/error.hpp"
#include "bssram/machine.hpp"
#include "bssram/nondet.hpp"
#include "bssram/oracle.hpp"
#include "bssram/parser.hpp"
#include "bssram/structure.hpp"

using json = nlohmann::json;
using namespace bssram;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitBudget = 2;
constexpr std::size_t kDefaultBudget = 10000;

struct MachineArgs {
    std::string program_path;
    std::string structure;
    std::string structure_file;
    std::vector<std::string> params;
    std::string oracle;
    std::string input;
    std::string formula;
    std::optional<std::size_t> k;
    std::optional<std::size_t> output_width;
    std::optional<std::size_t> budget;
    bool json = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t default_budget() {
    if (const char* env = std::getenv("BSSRAM_MAX_STEPS")) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string_view(env).size()) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
        throw Error("BSSRAM_MAX_STEPS must be a non-negative integer");
    }
    return kDefaultBudget;
}

StructurePtr load_structure(const MachineArgs& a) {
    if (!a.structure.empty() && !a.structure_file.empty()) {
        throw Error("--structure and --structure-file are mutually exclusive");
    }
    if (!a.structure_file.empty()) return load_finite_structure(read_file(a.structure_file));
    Params params;
    for (const auto& p : a.params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos) throw Error("--param expects key=value, got '" + p + "'");
        params.emplace_back(p.substr(0, eq), p.substr(eq + 1));
    }
    std::string name = a.structure;
    if (name.empty()) name = a.formula.empty() ? "rational-field-eq" : "bool-symbols";
    return get_builtin_structure(name, params);
}

OraclePtr load_oracle(const std::string& name, const StructurePtr& s) {
    if (name.empty()) return nullptr;
    for (const auto& n : builtin_oracle_names()) {
        if (n == name) return make_builtin_oracle(name, s);
    }
    return load_finite_oracle(read_file(name), s);
}

struct Loaded {
    StructurePtr structure;
    std::optional<Machine> machine;
    Tuple input;
};

Loaded load(const MachineArgs& a) {
    Loaded l;
    l.structure = load_structure(a);
    Program p;
    try {
        p = parse_program(read_file(a.program_path));
    } catch (const ParseError& e) {
        throw Error(a.program_path + ":" + e.what());
    }
    // Programs without index or oracle instructions run as finite machines,
    // whose result is Z1 unless a width is given.
    auto width = a.output_width;
    if (!width && validate_program(p, l.structure->signature(), Mode::finite).ok()) width = 1;
    l.machine.emplace(std::move(p), l.structure, a.k, load_oracle(a.oracle, l.structure), width);
    if (!a.formula.empty() && !a.input.empty()) throw Error("--input and --formula are mutually exclusive");
    if (!a.formula.empty()) {
        l.input = formula_input(a.formula, *l.structure);
    } else {
        l.input = l.structure->parse_tuple(a.input);
    }
    if (l.input.empty()) throw Error("an input tuple is required (--input)");
    return l;
}

json render_json(const Structure& s, const Tuple& t) {
    json out = json::array();
    for (const auto& e : t) out.push_back(s.render(e));
    return out;
}

std::string paren(const Structure& s, const Tuple& t) { return "(" + s.render_tuple(t) + ")"; }

void add_machine_options(CLI::App* cmd, MachineArgs& a) {
    cmd->add_option("program", a.program_path, "program file (.bssram)")->required();
    cmd->add_option("--structure", a.structure, "built-in structure name");
    cmd->add_option("--structure-file", a.structure_file, "finite structure description");
    cmd->add_option("--param", a.params, "structure parameter key=value");
    cmd->add_option("--oracle", a.oracle, "built-in oracle name or file of member tuples");
    cmd->add_option("--input", a.input, "comma-separated input elements");
    cmd->add_option("--formula", a.formula, "Boolean formula as machine input over bool-symbols");
    cmd->add_option("--k", a.k, "index register count (default: the program's minimum)");
    cmd->add_option("--output-width", a.output_width,
                    "report (Z1..Zw) instead of (Z1..Z[I1]); default 1 for programs without index instructions");
    cmd->add_flag("--json", a.json, "machine-readable output");
}

int cmd_run(const MachineArgs& a, bool with_trace) {
    Loaded l = load(a);
    const Machine& m = *l.machine;
    const Structure& s = *l.structure;
    const std::size_t budget = a.budget.value_or(default_budget());
    json j;
    j["command"] = "run";
    if (with_trace) {
        auto configs = trace(m, l.input, budget);
        json lines = json::array();
        for (const auto& c : configs) {
            const auto line = format_configuration(s, c);
            if (a.json) {
                lines.push_back(line);
            } else {
                std::cout << line << '\n';
            }
        }
        j["trace"] = lines;
    }
    const auto outcome = run(m, l.input, budget);
    if (const auto* h = std::get_if<Halted>(&outcome)) {
        if (a.json) {
            j["status"] = "halted";
            j["output"] = render_json(s, h->output);
            j["steps"] = h->steps;
            std::cout << j.dump(2) << '\n';
        } else {
            std::cout << paren(s, h->output) << '\n';
        }
        return kExitOk;
    }
    const auto& b = std::get<BudgetExhausted>(outcome);
    if (a.json) {
        j["status"] = "budget_exhausted";
        j["steps"] = b.steps;
        j["label"] = b.last.label;
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "no halt within " << b.steps << " steps (label " << b.last.label << ")\n";
    }
    return kExitBudget;
}

json witness_json(const Structure& s, const Witness& w) {
    json j;
    std::visit(
        [&](const auto& v) {
            using W = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<W, NdWitness>) {
                j["guesses"] = render_json(s, v.guesses);
                j["position"] = v.position;
            } else if constexpr (std::is_same_v<W, BranchWitness>) {
                j["choices"] = v.choices;
            } else if constexpr (std::is_same_v<W, NuWitness>) {
                j["choices"] = json::array();
                for (const auto& c : v.choices) {
                    j["choices"].push_back({{"label", c.label},
                                            {"query", render_json(s, c.query)},
                                            {"value", s.render(c.candidate.value)},
                                            {"extension", render_json(s, c.candidate.extension)}});
                }
            }
        },
        w);
    return j;
}

void print_witness(const Structure& s, const Witness& w) {
    std::visit(
        [&](const auto& v) {
            using W = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<W, NdWitness>) {
                std::cout << "guesses: " << paren(s, v.guesses) << '\n';
                std::cout << "position: " << v.position << '\n';
            } else if constexpr (std::is_same_v<W, BranchWitness>) {
                std::cout << "choices: " << (v.choices.empty() ? "(none)" : v.choices) << '\n';
            } else if constexpr (std::is_same_v<W, NuWitness>) {
                for (const auto& c : v.choices) {
                    std::cout << "nu at label " << c.label << ": " << s.render(c.candidate.value) << " since "
                              << paren(s, c.query) << " . " << paren(s, c.candidate.extension) << " is in the oracle set\n";
                }
            }
        },
        w);
}

int cmd_search(const MachineArgs& a, const std::string& engine_text) {
    const auto engine = parse_engine(engine_text);
    if (!engine || *engine == Engine::deterministic) {
        throw Error("unknown engine '" + engine_text + "' (expected nd, dnd, branch or nu)");
    }
    Loaded l = load(a);
    const Structure& s = *l.structure;
    const std::size_t budget = a.budget.value_or(default_budget());
    const auto outcome = search(*l.machine, *engine, l.input, budget);
    json j;
    j["command"] = "search";
    j["engine"] = engine_text;
    if (const auto* acc = std::get_if<Accepted>(&outcome)) {
        if (a.json) {
            j["status"] = "accepted";
            j["steps"] = acc->steps;
            j["output"] = render_json(s, acc->output);
            j["witness"] = witness_json(s, acc->witness);
            std::cout << j.dump(2) << '\n';
        } else {
            std::cout << "accepted\n";
            print_witness(s, acc->witness);
            std::cout << "steps: " << acc->steps << '\n';
            std::cout << "output: " << paren(s, acc->output) << '\n';
        }
        return kExitOk;
    }
    const auto& n = std::get<NotWithinBudget>(outcome);
    if (a.json) {
        j["status"] = "not_within_budget";
        j["budget"] = n.budget;
        j["truncated"] = n.truncated;
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "not accepted within budget " << n.budget << (n.truncated ? " (node limit reached)" : "") << '\n';
    }
    return kExitBudget;
}

Integer parse_positive(const std::string& text) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
        throw Error("expected a positive integer, got '" + text + "'");
    }
    Integer v(text);
    if (v < 1) throw Error("expected a positive integer, got '" + text + "'");
    return v;
}

BitTape parse_bit_tape(const std::string& text, int tail) {
    BitTape t;
    t.tail = tail;
    std::stringstream ss(text);
    for (std::string cell; std::getline(ss, cell, ',');) {
        if (cell != "0" && cell != "1") throw Error("tape cells must be 0 or 1, got '" + cell + "'");
        t.prefix.push_back(cell[0] - '0');
    }
    return t;
}

std::string format_bit_tape(const BitTape& t) {
    std::string out = "((" + std::to_string(t.nu1) + ",1,...,1) . (";
    for (int v : t.prefix) out += std::to_string(v) + ",";
    out += std::to_string(t.tail) + "," + std::to_string(t.tail) + ",...))";
    return out;
}

int cmd_encode(const std::string& mode, const std::vector<std::string>& args, int tail, bool as_json) {
    auto need = [&](std::size_t n) {
        if (args.size() != n) {
            throw Error("mode '" + mode + "' takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s"));
        }
    };
    std::string result;
    if (mode == "cantor") {
        need(2);
        result = cantor(parse_positive(args[0]), parse_positive(args[1])).str();
    } else if (mode == "cantor-inv") {
        need(1);
        auto ab = cantor_inv(parse_positive(args[0]));
        if (!ab) throw Error("not in range of the cantor pairing");
        result = ab->first.str() + " " + ab->second.str();
    } else if (mode == "bin") {
        need(1);
        result = bin(parse_positive(args[0]));
    } else if (mode == "bin-inv") {
        need(1);
        auto v = bin_inv(args[0]);
        if (!v) throw Error("not in range of bin");
        result = v->str();
    } else if (mode == "in-star") {
        need(1);
        result = format_bit_tape(in_star(args[0]));
    } else if (mode == "in-nat") {
        need(1);
        result = format_bit_tape(in_nat(parse_positive(args[0])));
    } else if (mode == "out-star") {
        need(1);
        auto w = out_star(parse_bit_tape(args[0], tail));
        result = w ? *w : "Lambda";
    } else if (mode == "out-nat") {
        need(1);
        auto v = out_nat(parse_bit_tape(args[0], tail));
        if (!v) throw Error("tape does not decode to a positive integer");
        result = v->str();
    } else {
        throw Error("unknown encode mode '" + mode + "'");
    }
    if (as_json) {
        std::cout << json{{"command", "encode"}, {"mode", mode}, {"result", result}}.dump(2) << '\n';
    } else {
        std::cout << result << '\n';
    }
    return kExitOk;
}

int cmd_validate(const MachineArgs& a, const std::string& mode_text) {
    Mode mode;
    if (mode_text == "infinite") {
        mode = Mode::infinite;
    } else if (mode_text == "finite") {
        mode = Mode::finite;
    } else {
        throw Error("--mode must be finite or infinite");
    }
    Program p;
    try {
        p = parse_program(read_file(a.program_path));
    } catch (const ParseError& e) {
        throw Error(a.program_path + ":" + e.what());
    }
    Signature sig = p.signature();
    if (!a.structure.empty() || !a.structure_file.empty()) sig = load_structure(a)->signature();
    const auto r = validate_program(p, sig, mode);
    if (a.json) {
        json j{{"command", "validate"},
               {"status", r.ok() ? "ok" : "invalid"},
               {"signature", format_signature(p.signature())},
               {"k_P", r.k_P},
               {"j_max", r.j_max},
               {"uses", {{"oracle", r.uses.oracle}, {"nu", r.uses.nu}, {"branch", r.uses.branch}, {"indirect", r.uses.indirect}}},
               {"errors", r.errors}};
        std::cout << j.dump(2) << '\n';
    } else {
        for (const auto& e : r.errors) std::cerr << a.program_path << ": " << e << '\n';
        if (r.ok()) {
            std::cout << "ok: " << p.size() << " instructions, signature " << format_signature(p.signature())
                      << ", k_P = " << r.k_P << ", j_max = " << r.j_max << '\n';
        }
    }
    return r.ok() ? kExitOk : kExitError;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"BSS RAM interpreter over first-order structures"};
    app.require_subcommand(1);

    MachineArgs run_args;
    std::size_t run_steps = 0;
    bool with_trace = false;
    auto* run_cmd = app.add_subcommand("run", "run a deterministic machine");
    add_machine_options(run_cmd, run_args);
    auto* steps_opt = run_cmd->add_option("--max-steps", run_steps, "step budget (default: BSSRAM_MAX_STEPS or 10000)");
    run_cmd->add_flag("--trace", with_trace, "print every configuration");

    MachineArgs search_args;
    std::size_t search_budget = 0;
    std::string engine;
    auto* search_cmd = app.add_subcommand("search", "non-deterministic acceptance search");
    add_machine_options(search_cmd, search_args);
    search_cmd->add_option("--engine", engine, "nd, dnd, branch or nu")->required();
    auto* budget_opt = search_cmd->add_option("--budget", search_budget, "search budget (default: BSSRAM_MAX_STEPS or 10000)");

    std::string enc_mode;
    std::vector<std::string> enc_args;
    int enc_tail = 1;
    bool enc_json = false;
    auto* enc_cmd = app.add_subcommand("encode", "pairing and {0,1} tape encodings");
    enc_cmd->add_option("--mode", enc_mode, "cantor, cantor-inv, bin, bin-inv, in-star, in-nat, out-star, out-nat")
        ->required();
    enc_cmd->add_option("args", enc_args, "mode arguments");
    enc_cmd->add_option("--tail", enc_tail, "tail value for out-star / out-nat tapes")->check(CLI::Range(0, 1));
    enc_cmd->add_flag("--json", enc_json, "machine-readable output");

    MachineArgs val_args;
    std::string val_mode = "infinite";
    auto* val_cmd = app.add_subcommand("validate", "check a program against a signature");
    val_cmd->add_option("program", val_args.program_path, "program file (.bssram)")->required();
    val_cmd->add_option("--structure", val_args.structure, "built-in structure name");
    val_cmd->add_option("--structure-file", val_args.structure_file, "finite structure description");
    val_cmd->add_option("--param", val_args.params, "structure parameter key=value");
    val_cmd->add_option("--mode", val_mode, "finite or infinite");
    val_cmd->add_flag("--json", val_args.json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    bool as_json = false;
    try {
        if (*run_cmd) {
            as_json = run_args.json;
            if (*steps_opt) run_args.budget = run_steps;
            return cmd_run(run_args, with_trace);
        }
        if (*search_cmd) {
            as_json = search_args.json;
            if (*budget_opt) search_args.budget = search_budget;
            return cmd_search(search_args, engine);
        }
        if (*enc_cmd) {
            as_json = enc_json;
            return cmd_encode(enc_mode, enc_args, enc_tail, enc_json);
        }
        as_json = val_args.json;
        return cmd_validate(val_args, val_mode);
    } catch (const std::exception& e) {
        if (as_json) {
            std::cout << json{{"status", "error"}, {"message", e.what()}}.dump(2) << '\n';
        }
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
}
