// Command-line front end: parse diagram files, normalize/contract/render
// them, evaluate against models, run comb operations and the law suite.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "markov/combs.hpp"
#include "markov/contraction.hpp"
#include "markov/dot.hpp"
#include "markov/dsl.hpp"
#include "markov/interp.hpp"
#include "markov/json_io.hpp"
#include "markov/laws.hpp"
#include "markov/term.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw markov::Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

nlohmann::json read_json(const std::string& path) {
    return nlohmann::json::parse(read_file(path));
}

markov::ParsedProgram load_program(const std::string& path) {
    return markov::parse_program(read_file(path));
}

void print_program(const markov::Signature& sig, const std::string& name,
                   const markov::Diagram& d) {
    std::cout << markov::signature_to_text(sig);
    std::cout << "diag " << name << " = " << markov::diagram_to_term_text(d) << ";\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"String-diagram engine for free Markov categories with a "
                 "finite-stochastic backend"};
    app.require_subcommand(1);

    std::string file, diag_name, model_path, comb_a, comb_b, hole_path;
    int feedback = 0;
    std::uint64_t seed = 0;
    int cases = 100;
    int contexts = 20;
    bool dot_format = false;

    auto* validate_cmd = app.add_subcommand("validate", "Check a diagram file");
    validate_cmd->add_option("file", file)->required();

    auto* normalize_cmd = app.add_subcommand("normalize", "Print the normal form of a diagram");
    normalize_cmd->add_option("file", file)->required();
    normalize_cmd->add_option("--diag", diag_name)->required();

    auto* contract_cmd =
        app.add_subcommand("contract", "Contract trailing feedback wires of a diagram");
    contract_cmd->add_option("file", file)->required();
    contract_cmd->add_option("--diag", diag_name)->required();
    contract_cmd->add_option("--feedback", feedback)->required();

    auto* nonsig_cmd = app.add_subcommand("nonsignalling",
                                          "Check the structural non-signalling condition");
    nonsig_cmd->add_option("file", file)->required();
    nonsig_cmd->add_option("--diag", diag_name)->required();
    nonsig_cmd->add_option("--feedback", feedback)->required();

    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a diagram to a kernel under a model");
    eval_cmd->add_option("file", file)->required();
    eval_cmd->add_option("--diag", diag_name)->required();
    eval_cmd->add_option("--model", model_path)->required();

    auto* trace_cmd = app.add_subcommand(
        "trace-check", "Compare the contracted diagram against the causal trace of its kernel");
    trace_cmd->add_option("file", file)->required();
    trace_cmd->add_option("--diag", diag_name)->required();
    trace_cmd->add_option("--feedback", feedback)->required();
    trace_cmd->add_option("--model", model_path)->required();

    auto* comb_cmd = app.add_subcommand("comb", "Comb operations over kernel JSON files");
    comb_cmd->require_subcommand(1);
    auto* comb_extend = comb_cmd->add_subcommand("extend", "Extension of a comb");
    comb_extend->add_option("comb", comb_a)->required();
    auto* comb_insert = comb_cmd->add_subcommand("insert", "Insert a kernel into a comb's hole");
    comb_insert->add_option("comb", comb_a)->required();
    comb_insert->add_option("hole", hole_path)->required();
    auto* comb_equiv = comb_cmd->add_subcommand("equiv", "Extensional/contextual equivalence");
    comb_equiv->add_option("comb1", comb_a)->required();
    comb_equiv->add_option("comb2", comb_b)->required();
    comb_equiv->add_option("--contexts", contexts);
    comb_equiv->add_option("--seed", seed);

    auto* laws_cmd = app.add_subcommand("laws", "Run the randomized law suite");
    laws_cmd->add_option("--seed", seed);
    laws_cmd->add_option("--cases", cases);

    auto* render_cmd = app.add_subcommand("render", "Render a diagram");
    render_cmd->add_option("file", file)->required();
    render_cmd->add_option("--diag", diag_name)->required();
    render_cmd->add_flag("--dot", dot_format, "DOT digraph output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (validate_cmd->parsed()) {
            auto prog = load_program(file);
            for (const auto& name : prog.order) {
                const auto& d = prog.diagram(name);
                std::cout << name << ": valid, " << d.left().size() << " -> "
                          << d.right().size() << ", " << d.graph().box_count() << " boxes\n";
            }
            return 0;
        }
        if (normalize_cmd->parsed()) {
            auto prog = load_program(file);
            print_program(*prog.sig, diag_name, prog.diagram(diag_name));
            return 0;
        }
        if (contract_cmd->parsed()) {
            auto prog = load_program(file);
            markov::TracePartition t(prog.diagram(diag_name), feedback);
            print_program(*prog.sig, diag_name, markov::contract(t));
            return 0;
        }
        if (nonsig_cmd->parsed()) {
            auto prog = load_program(file);
            markov::TracePartition t(prog.diagram(diag_name), feedback);
            bool ok = markov::is_nonsignalling(t);
            std::cout << (ok ? "true" : "false") << "\n";
            return ok ? 0 : 1;
        }
        if (eval_cmd->parsed()) {
            auto prog = load_program(file);
            markov::Model m = markov::model_from_json(read_json(model_path), prog.sig);
            markov::Kernel k = markov::interpret(prog.diagram(diag_name), m);
            std::cout << markov::kernel_to_json(k).dump(2) << "\n";
            return 0;
        }
        if (trace_cmd->parsed()) {
            auto prog = load_program(file);
            markov::Model m = markov::model_from_json(read_json(model_path), prog.sig);
            markov::TracePartition t(prog.diagram(diag_name), feedback);
            auto res = markov::check_trace_soundness(t, m);
            if (res.holds) {
                std::cout << "holds (residual " << res.residual << ")\n";
                return 0;
            }
            std::cout << "MISMATCH (residual " << res.residual << ")\n";
            std::cout << "contracted: " << markov::kernel_to_json(res.contracted).dump() << "\n";
            std::cout << "traced:     " << markov::kernel_to_json(res.traced).dump() << "\n";
            return 1;
        }
        if (comb_extend->parsed()) {
            markov::Comb c = markov::comb_from_json(read_json(comb_a));
            std::cout << markov::kernel_to_json(markov::extension(c)).dump(2) << "\n";
            return 0;
        }
        if (comb_insert->parsed()) {
            markov::Comb c = markov::comb_from_json(read_json(comb_a));
            markov::Kernel h = markov::kernel_from_json(read_json(hole_path));
            std::cout << markov::kernel_to_json(markov::insert(c, h)).dump(2) << "\n";
            return 0;
        }
        if (comb_equiv->parsed()) {
            markov::Comb c1 = markov::comb_from_json(read_json(comb_a));
            markov::Comb c2 = markov::comb_from_json(read_json(comb_b));
            std::mt19937_64 rng(seed);
            bool eq = markov::ctx_equiv(c1, c2, contexts, rng);
            std::cout << (eq ? "equivalent" : "not equivalent") << "\n";
            return eq ? 0 : 1;
        }
        if (laws_cmd->parsed()) {
            markov::LawReport rep = markov::run_law_suite(seed, cases);
            nlohmann::json out;
            out["seed"] = rep.seed;
            out["checks"] = nlohmann::json::array();
            for (const auto& r : rep.results)
                out["checks"].push_back({{"name", r.name},
                                         {"cases", r.cases},
                                         {"violations", r.violations},
                                         {"worst_residual", r.worst_residual}});
            out["total_violations"] = rep.total_violations();
            std::cout << out.dump(2) << "\n";
            return rep.total_violations() == 0 ? 0 : 1;
        }
        if (render_cmd->parsed()) {
            auto prog = load_program(file);
            const auto& d = prog.diagram(diag_name);
            if (dot_format)
                std::cout << markov::to_dot(d, diag_name);
            else
                print_program(*prog.sig, diag_name, d);
            return 0;
        }
    } catch (const markov::ParseError& e) {
        std::cerr << "error: " << file << ":" << e.what() << "\n";
        return 1;
    } catch (const markov::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
