#pragma once

#include <vector>

#include "markov/contraction.hpp"
#include "markov/diagram.hpp"
#include "markov/stoch.hpp"

namespace markov {

/// An interpreting functor's data: a cardinality for every signature type
/// and a row-stochastic kernel for every signature box, with matching
/// arities. Totality and arity agreement are enforced at construction.
struct Model {
    Model(SignaturePtr sig, std::vector<int> type_cards, std::vector<Kernel> box_kernels);

    SignaturePtr sig;
    std::vector<int> type_cards;     // by TypeId
    std::vector<Kernel> box_kernels; // by box label

    FinSet finset(TypeId t) const;
    Factors factors(const std::vector<TypeId>& types) const;
    const Kernel& box_kernel(int label) const { return box_kernels.at(label); }
};

/// Evaluates a diagram to a kernel by tensor-network contraction in the
/// nonnegative-matrix category: shared wires are diagonal indices, wire
/// fan-out is the copy diagonal, dangling wires contract with all-ones.
/// The result is asserted row-stochastic.
Kernel interpret(const Diagram& d, const Model& m, const Tolerances& tol = {});

struct SoundnessResult {
    bool holds;
    double residual;
    Kernel contracted;  // interpretation of the contracted diagram
    Kernel traced;      // causal trace of the interpretation
};

/// Checks that interpretation commutes with contraction: evaluates
/// contract(t) under the model, and separately applies the causal trace to
/// the evaluation of t. Requires the structural non-signalling condition.
SoundnessResult check_trace_soundness(const TracePartition& t, const Model& m,
                                      const Tolerances& tol = {});

}  // namespace markov
