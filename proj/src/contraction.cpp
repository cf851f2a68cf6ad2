#include "markov/contraction.hpp"

#include <queue>

#include "markov/interp.hpp"

namespace markov {

TracePartition::TracePartition(Diagram d, int feedback) : d_(std::move(d)), feedback_(feedback) {
    if (feedback < 0 || feedback > static_cast<int>(d_.left().size()) ||
        feedback > static_cast<int>(d_.right().size()))
        throw Error("trace partition: feedback count out of range");
    for (int k = 0; k < feedback; ++k)
        if (d_.graph().wire_type(w_in(k)) != d_.graph().wire_type(w_out(k)))
            throw Error("trace partition: feedback type lists disagree at position " +
                        std::to_string(k));
}

bool is_nonsignalling(const TracePartition& t) {
    const auto& g = t.diagram().graph();
    std::vector<std::vector<WireId>> succ(g.wire_count());
    for (const auto& box : g.boxes())
        for (WireId w : box.inputs)
            for (WireId v : box.outputs) succ[w].push_back(v);
    std::vector<char> reach(g.wire_count(), 0);
    std::queue<WireId> frontier;
    for (int k = 0; k < t.feedback(); ++k) {
        WireId w = t.w_in(k);
        if (!reach[w]) {
            reach[w] = 1;
            frontier.push(w);
        }
    }
    while (!frontier.empty()) {
        WireId w = frontier.front();
        frontier.pop();
        for (WireId v : succ[w]) {
            if (!reach[v]) {
                reach[v] = 1;
                frontier.push(v);
            }
        }
    }
    for (int k = 0; k < t.feedback(); ++k)
        if (reach[t.w_out(k)]) return false;
    return true;
}

Diagram contract(const TracePartition& t) {
    if (!is_nonsignalling(t))
        throw SignallingError("contract: directed path from a feedback input to a feedback output");
    const Cospan& c = t.diagram().cospan();
    std::vector<std::pair<WireId, WireId>> pairs;
    pairs.reserve(t.feedback());
    for (int k = 0; k < t.feedback(); ++k) pairs.emplace_back(t.w_in(k), t.w_out(k));
    auto q = quotient_wires(c.graph, pairs);
    std::vector<WireId> left, right;
    for (int k = 0; k < t.m(); ++k) left.push_back(q.wire_map[c.left[k]]);
    for (int k = 0; k < t.n(); ++k) right.push_back(q.wire_map[c.right[k]]);
    // normalize re-validates the result (acyclicity and monogamy are
    // guaranteed by non-signalling, but checked anyway).
    return normalize(Cospan{std::move(q.graph), std::move(left), std::move(right)});
}

ContractionCheck check_contraction_identity(const TracePartition& c1, const TracePartition& c2,
                                            const Model& model, const Tolerances& tol) {
    if (c1.diagram().left_types() != c2.diagram().left_types() ||
        c1.diagram().right_types() != c2.diagram().right_types() || c1.feedback() != c2.feedback())
        throw Error("contraction identity: boundary mismatch");
    Kernel k1 = interpret(c1.diagram(), model, tol);
    Kernel k2 = interpret(c2.diagram(), model, tol);
    double premise = max_abs_diff(k1, k2);
    if (premise > tol.eq)
        return ContractionCheck{ContractionVerdict::Vacuous, premise, 0.0, std::nullopt, std::nullopt};
    Kernel l1 = interpret(contract(c1), model, tol);
    Kernel l2 = interpret(contract(c2), model, tol);
    double conclusion = max_abs_diff(l1, l2);
    if (conclusion <= tol.eq)
        return ContractionCheck{ContractionVerdict::Holds, premise, conclusion, std::nullopt,
                                std::nullopt};
    return ContractionCheck{ContractionVerdict::Violation, premise, conclusion, std::move(l1),
                            std::move(l2)};
}

}  // namespace markov
