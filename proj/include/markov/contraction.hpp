#pragma once

#include <optional>

#include "markov/diagram.hpp"
#include "markov/stoch.hpp"

namespace markov {

/// A diagram m (x) w -> n (x) w together with the boundary split: the last
/// `feedback` wires of each boundary form the w segment. The two w type
/// lists must agree position-wise.
class TracePartition {
public:
    TracePartition(Diagram d, int feedback);

    const Diagram& diagram() const { return d_; }
    int feedback() const { return feedback_; }
    int m() const { return static_cast<int>(d_.left().size()) - feedback_; }
    int n() const { return static_cast<int>(d_.right().size()) - feedback_; }

    WireId w_in(int k) const { return d_.left()[m() + k]; }
    WireId w_out(int k) const { return d_.right()[n() + k]; }

private:
    Diagram d_;
    int feedback_;
};

/// True iff no directed path (including the empty path: shared wire) leads
/// from a w input-boundary wire to a w output-boundary wire.
bool is_nonsignalling(const TracePartition& t);

/// The causal trace in the free category: glues the k-th w input wire to the
/// k-th w output wire, making them inner wires, then normalizes. Requires
/// is_nonsignalling(t); the result is validated.
Diagram contract(const TracePartition& t);

struct Model;  // interp module

enum class ContractionVerdict { Holds, Vacuous, Violation };

struct ContractionCheck {
    ContractionVerdict verdict;
    double premise_residual;     // max-abs gap between the interpreted inputs
    double conclusion_residual;  // max-abs gap between the contracted sides
    std::optional<Kernel> lhs;   // witness matrices on Violation
    std::optional<Kernel> rhs;
};

/// Contraction-identity instance check: if the two sides interpret equally
/// under the model, their contractions must too.
ContractionCheck check_contraction_identity(const TracePartition& c1, const TracePartition& c2,
                                            const Model& model, const Tolerances& tol = {});

}  // namespace markov
