#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "markov/stoch.hpp"

namespace markov {

struct LawResult {
    std::string name;
    int cases = 0;
    int violations = 0;
    double worst_residual = 0.0;
};

struct LawReport {
    std::uint64_t seed = 0;
    std::vector<LawResult> results;
    int total_violations() const;
};

// Each law runs `cases` independently seeded instances and reports the
// violation count plus the worst residual seen (0 for exact laws).

// Finite-stochastic backend.
std::vector<LawResult> kernel_trace_axiom_laws(std::uint64_t seed, int cases, double eps,
                                               int max_card = 4);
LawResult yanking_exact_law(int max_w = 6);
LawResult mat_trace_scalar_law();
LawResult diagonal_oracle_law(std::uint64_t seed, int cases, double eps);
LawResult well_definedness_law(std::uint64_t seed, int cases, double eps);
LawResult atomicity_law(std::uint64_t seed, int cases);
LawResult support_order_law(std::uint64_t seed, int cases);
LawResult conditional_law(std::uint64_t seed, int cases, double eps);
LawResult bayes_law(std::uint64_t seed, int cases, double eps);

// Free Markov category.
std::vector<LawResult> free_structure_laws(std::uint64_t seed, int cases);
std::vector<LawResult> free_contraction_laws(std::uint64_t seed, int cases);
LawResult normalization_confluence_law(std::uint64_t seed, int cases);

// Combs.
LawResult comb_roundtrip_law(std::uint64_t seed, int cases, double eps);
LawResult comb_insertion_law(std::uint64_t seed, int pairs, int contexts_each, double eps);
LawResult comb_sliding_law(std::uint64_t seed, int cases, double eps);

// Interpretation.
LawResult interp_functoriality_law(std::uint64_t seed, int cases, double eps);
LawResult trace_soundness_law(std::uint64_t seed, int cases, double eps);

/// Runs every law with default tolerances; `cases` scales all case counts.
LawReport run_law_suite(std::uint64_t seed, int cases);

}  // namespace markov
