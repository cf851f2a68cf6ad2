// Acceptance suite: one line per criterion, each pinned to its stated
// tolerance and case count. Exits nonzero if any criterion fails.

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "markov/laws.hpp"

namespace {

constexpr std::uint64_t kSeed = 20250809;

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail = "") {
    std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.empty() ? "" : " — ", detail.c_str());
    if (!pass) failures++;
}

bool all_clean(const std::vector<markov::LawResult>& rs, std::string& detail) {
    int violations = 0;
    double worst = 0.0;
    for (const auto& r : rs) {
        violations += r.violations;
        worst = std::max(worst, r.worst_residual);
    }
    std::ostringstream d;
    d << "worst residual " << worst << ", violations " << violations;
    detail = d.str();
    return violations == 0;
}

bool clean(const markov::LawResult& r, std::string& detail) {
    return all_clean({r}, detail);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CliRun {
    int exit_code;
    std::string output;
};

CliRun run_cli(const std::string& args) {
    std::string tmp = "/tmp/markov_acceptance_" + std::to_string(getpid()) + ".out";
    std::string cmd = std::string(MARKOV_CLI_PATH) + " " + args + " > " + tmp + " 2>&1";
    int rc = std::system(cmd.c_str());
    CliRun r{rc == -1 ? -1 : WEXITSTATUS(rc), slurp(tmp)};
    std::remove(tmp.c_str());
    return r;
}

}  // namespace

int main() {
    using namespace markov;
    std::string detail;

    {
        auto rs = kernel_trace_axiom_laws(kSeed, 500, 1e-8, 4);
        report(1, "six causal-trace axioms on 500 random non-signalling kernels (tol 1e-8)",
               all_clean(rs, detail), detail);
    }
    {
        report(2, "causal_trace(swap) = id exactly for |W| = 1..6",
               clean(yanking_exact_law(6), detail), detail);
    }
    {
        report(3, "diagonal-sum oracle agreement and row normalization on 500 kernels (tol 1e-9)",
               clean(diagonal_oracle_law(kSeed, 500, 1e-9), detail), detail);
    }
    {
        report(4, "matrix trace of id_W is the scalar |W| for |W| = 2,3,4",
               clean(mat_trace_scalar_law(), detail), detail);
    }
    {
        report(5, "trace invariance across disintegration choices, 200 kernels (tol 1e-12)",
               clean(well_definedness_law(kSeed, 200, 1e-12), detail), detail);
    }
    {
        report(6, "atomicity of 500 random, deterministic, and full-support kernels",
               clean(atomicity_law(kSeed, 500), detail), detail);
    }
    {
        auto rs = free_structure_laws(kSeed, 300);
        auto contraction = free_contraction_laws(kSeed, 300);
        rs.insert(rs.end(), contraction.begin(), contraction.end());
        rs.push_back(normalization_confluence_law(kSeed, 300));
        report(7,
               "free-category laws, contraction axioms, and exhaustive normalization "
               "confluence on 300 random diagrams",
               all_clean(rs, detail), detail);
    }
    {
        report(8, "interpretation commutes with contraction on 300 diagram/model pairs (tol 1e-8)",
               clean(trace_soundness_law(kSeed, 300, 1e-8), detail), detail);
    }
    {
        auto roundtrip = comb_roundtrip_law(kSeed, 300, 1e-9);
        auto contexts = comb_insertion_law(kSeed, 100, 50, 1e-8);
        report(9,
               "comb round-trip on 300 kernels (tol 1e-9) and 100 extensional pairs x 50 "
               "contexts (tol 1e-8)",
               all_clean({roundtrip, contexts}, detail), detail);
    }
    {
        report(10, "200 sliding-generated comb pairs are extensionally equal",
               clean(comb_sliding_law(kSeed, 200, 1e-9), detail), detail);
    }
    {
        auto cond = conditional_law(kSeed, 500, 1e-9);
        auto bayes = bayes_law(kSeed, 500, 1e-9);
        report(11, "conditional and Bayesian-inverse recomposition on 500 instances each (tol 1e-9)",
               all_clean({cond, bayes}, detail), detail);
    }
    {
        std::string fixtures = MARKOV_FIXTURES_DIR;
        std::string golden = MARKOV_GOLDEN_DIR;
        bool ok = true;
        std::ostringstream why;

        auto expect = [&](const CliRun& r, int code, const char* what) {
            if (r.exit_code != code) {
                ok = false;
                why << what << " exited " << r.exit_code << " (wanted " << code << "); ";
            }
        };

        std::string chain = fixtures + "/feedback_chain.diag";
        std::string chain_model = fixtures + "/feedback_chain_model.json";
        std::string pair = fixtures + "/contraction_pair.diag";
        std::string pair_model = fixtures + "/contraction_pair_model.json";

        expect(run_cli("validate " + chain), 0, "validate feedback_chain");
        expect(run_cli("validate " + pair), 0, "validate contraction_pair");
        expect(run_cli("nonsignalling " + chain + " --diag d --feedback 1"), 0, "nonsignalling");
        expect(run_cli("contract " + chain + " --diag d --feedback 1"), 0, "contract");
        expect(run_cli("contract " + pair + " --diag c1 --feedback 1"), 0, "contract c1");
        expect(run_cli("contract " + pair + " --diag c2 --feedback 1"), 0, "contract c2");
        expect(run_cli("trace-check " + chain + " --diag d --feedback 1 --model " + chain_model),
               0, "trace-check");
        expect(run_cli("trace-check " + pair + " --diag c1 --feedback 1 --model " + pair_model),
               0, "trace-check c1");
        expect(run_cli("trace-check " + pair + " --diag c2 --feedback 1 --model " + pair_model),
               0, "trace-check c2");

        // The bundled model makes the two presentations equal, so their
        // evaluations must be byte-identical.
        CliRun pair1 = run_cli("eval " + pair + " --diag c1 --model " + pair_model);
        CliRun pair2 = run_cli("eval " + pair + " --diag c2 --model " + pair_model);
        expect(pair1, 0, "eval c1");
        expect(pair2, 0, "eval c2");
        if (pair1.output != pair2.output) {
            ok = false;
            why << "premise-equal encodings evaluated differently; ";
        }

        CliRun eval1 = run_cli("eval " + chain + " --diag d --model " + chain_model);
        CliRun eval2 = run_cli("eval " + chain + " --diag d --model " + chain_model);
        expect(eval1, 0, "eval");
        if (eval1.output != eval2.output) {
            ok = false;
            why << "eval output changed between runs; ";
        }
        std::string eval_golden = slurp(golden + "/feedback_chain_eval.json");
        if (eval1.output != eval_golden) {
            ok = false;
            why << "eval output differs from the golden file; ";
        }

        CliRun dot1 = run_cli("render " + chain + " --diag d --dot");
        CliRun dot2 = run_cli("render " + chain + " --diag d --dot");
        expect(dot1, 0, "render");
        if (dot1.output != dot2.output) {
            ok = false;
            why << "DOT output changed between runs; ";
        }
        std::string dot_golden = slurp(golden + "/feedback_chain.dot");
        if (dot1.output != dot_golden) {
            ok = false;
            why << "DOT output differs from the golden file; ";
        }

        CliRun contracted = run_cli("contract " + pair + " --diag c1 --feedback 1");
        std::string contract_golden = slurp(golden + "/contraction_pair_c1_contracted.txt");
        if (contracted.output != contract_golden) {
            ok = false;
            why << "contract output differs from the golden file; ";
        }

        report(12, "CLI end-to-end on the bundled encodings with byte-stable golden outputs", ok,
               ok ? "validate/contract/eval/render all byte-stable" : why.str());
    }

    if (failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criteria FAILED\n", failures);
    return 1;
}
