#pragma once

#include <optional>
#include <random>

#include "markov/contraction.hpp"
#include "markov/diagram.hpp"
#include "markov/interp.hpp"
#include "markov/stoch.hpp"

namespace markov {

// Randomized fixtures shared by the law-suite command and the test suites.
// Everything is driven by an explicit engine so runs are reproducible;
// per-case engines should be derived from a master seed.

int rand_int(std::mt19937_64& rng, int lo, int hi);  // inclusive
double rand_unit(std::mt19937_64& rng);

Factors random_factors(std::mt19937_64& rng, int min_count, int max_count, int min_card,
                       int max_card, const std::string& prefix);

/// Row-stochastic matrix with independently sampled, normalized rows.
Kernel random_kernel(std::mt19937_64& rng, Factors dom, Factors cod);

/// Kernel with exact zeros (each row keeps at least one positive entry).
Kernel random_sparse_kernel(std::mt19937_64& rng, Factors dom, Factors cod);

Kernel random_deterministic_kernel(std::mt19937_64& rng, Factors dom, Factors cod);

/// Non-signalling kernel X (x) W' -> Y (x) W assembled from random
/// disintegration pieces (returned alongside the composite).
struct NsKernel {
    Kernel f;
    Kernel w_marginal;  // X -> W
    Kernel remainder;   // W (x) X (x) W' -> Y
};
NsKernel random_nonsignalling(std::mt19937_64& rng, Factors x, Factors w_in, Factors y,
                              Factors w_out, bool sparse_marginal = false);

SignaturePtr random_signature(std::mt19937_64& rng);

/// Fixed signature with enough shape variety for the law suites: boxes of
/// every small arity, including states (no inputs) for all types, so that
/// boundary-constrained generation always succeeds.
SignaturePtr law_signature();

struct DiagramOptions {
    int max_boxes = 5;
    int max_wires = 8;
    std::optional<std::vector<TypeId>> left_types;   // random when unset
    std::optional<std::vector<TypeId>> right_types;  // satisfied via state boxes if needed
};

/// Random cospan built like random_diagram but without the normalization
/// pass, so eliminable boxes survive (fodder for confluence checks).
Cospan random_cospan(std::mt19937_64& rng, SignaturePtr sig, const DiagramOptions& opts = {});

/// Random valid diagram: boxes are attached to existing wires (inputs may
/// fan out), outputs create fresh wires, the right boundary samples wires
/// with repetition. Normalization may drop dead boxes.
Diagram random_diagram(std::mt19937_64& rng, SignaturePtr sig, const DiagramOptions& opts = {});

/// Isomorphic copy with freshly shuffled wire and box ids.
Diagram permuted_copy(const Diagram& d, std::mt19937_64& rng);

/// Random structurally non-signalling trace partition with `feedback`
/// fed-back wires. Returns nullopt when the sampled diagram admits none.
std::optional<TracePartition> random_trace_partition(std::mt19937_64& rng, SignaturePtr sig,
                                                     int feedback, const DiagramOptions& opts = {});

Model random_model(std::mt19937_64& rng, SignaturePtr sig, int max_card = 3);

}  // namespace markov
