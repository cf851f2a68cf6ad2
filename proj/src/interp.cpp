#include "markov/interp.hpp"

#include <algorithm>
#include <cmath>

namespace markov {

Model::Model(SignaturePtr signature, std::vector<int> cards, std::vector<Kernel> kernels)
    : sig(std::move(signature)), type_cards(std::move(cards)), box_kernels(std::move(kernels)) {
    if (static_cast<int>(type_cards.size()) != sig->type_count())
        throw Error("model: cardinality missing for some type");
    for (int t = 0; t < sig->type_count(); ++t)
        if (type_cards[t] < 1) throw Error("model: type " + sig->type_name(t) + " has cardinality 0");
    if (static_cast<int>(box_kernels.size()) != sig->box_count())
        throw Error("model: kernel missing for some box");
    for (int b = 0; b < sig->box_count(); ++b) {
        if (!same_card(box_kernels[b].dom(), factors(sig->box_inputs(b))) ||
            !same_card(box_kernels[b].cod(), factors(sig->box_outputs(b))))
            throw Error("model: kernel arity mismatch for box " + sig->box_name(b));
    }
}

FinSet Model::finset(TypeId t) const { return FinSet(sig->type_name(t), type_cards.at(t)); }

Factors Model::factors(const std::vector<TypeId>& types) const {
    Factors out;
    out.reserve(types.size());
    for (TypeId t : types) out.push_back(finset(t));
    return out;
}

namespace {

// Dense tensor whose axes are wires of the diagram. Axes are distinct wires;
// a box mentioning the same wire twice contributes a diagonal slice.
struct WireTensor {
    std::vector<WireId> wires;
    std::vector<int> dims;
    std::vector<double> data;

    std::int64_t size() const {
        std::int64_t n = 1;
        for (int d : dims) n *= d;
        return n;
    }
};

std::int64_t flat_index(const WireTensor& t, const std::vector<int>& value_of_wire) {
    std::int64_t idx = 0;
    for (size_t i = 0; i < t.wires.size(); ++i) idx = idx * t.dims[i] + value_of_wire[t.wires[i]];
    return idx;
}

WireTensor box_tensor(const Hypergraph& g, const Box& box, const Model& m) {
    const Kernel& k = m.box_kernel(box.label);
    // Distinct wires in first-seen order over (inputs, outputs).
    WireTensor t;
    std::vector<int> slot_axis;
    auto axis_of = [&](WireId w) {
        for (size_t i = 0; i < t.wires.size(); ++i)
            if (t.wires[i] == w) return static_cast<int>(i);
        t.wires.push_back(w);
        t.dims.push_back(m.type_cards[g.wire_type(w)]);
        return static_cast<int>(t.wires.size()) - 1;
    };
    for (WireId w : box.inputs) slot_axis.push_back(axis_of(w));
    for (WireId w : box.outputs) slot_axis.push_back(axis_of(w));
    t.data.assign(t.size(), 0.0);

    std::vector<int> axis_val(t.wires.size(), 0);
    for (;;) {
        std::int64_t in_idx = 0, out_idx = 0;
        size_t slot = 0;
        for (WireId w : box.inputs) {
            in_idx = in_idx * m.type_cards[g.wire_type(w)] + axis_val[slot_axis[slot]];
            slot++;
        }
        for (WireId w : box.outputs) {
            out_idx = out_idx * m.type_cards[g.wire_type(w)] + axis_val[slot_axis[slot]];
            slot++;
        }
        std::int64_t idx = 0;
        for (size_t i = 0; i < t.wires.size(); ++i) idx = idx * t.dims[i] + axis_val[i];
        t.data[idx] = k.at(in_idx, out_idx);

        int i = static_cast<int>(t.wires.size()) - 1;
        for (; i >= 0; --i) {
            if (++axis_val[i] < t.dims[i]) break;
            axis_val[i] = 0;
        }
        if (i < 0) break;
    }
    return t;
}

// Pointwise product over the union of axes (shared wires are matched, not
// summed; summation happens separately once a wire is fully consumed).
WireTensor product(const WireTensor& a, const WireTensor& b, int wire_count) {
    WireTensor out;
    out.wires = a.wires;
    out.dims = a.dims;
    for (size_t i = 0; i < b.wires.size(); ++i) {
        if (std::find(a.wires.begin(), a.wires.end(), b.wires[i]) == a.wires.end()) {
            out.wires.push_back(b.wires[i]);
            out.dims.push_back(b.dims[i]);
        }
    }
    out.data.assign(out.size(), 0.0);
    std::vector<int> value(wire_count, 0);
    std::vector<int> axis_val(out.wires.size(), 0);
    for (;;) {
        for (size_t i = 0; i < out.wires.size(); ++i) value[out.wires[i]] = axis_val[i];
        std::int64_t idx = 0;
        for (size_t i = 0; i < out.wires.size(); ++i) idx = idx * out.dims[i] + axis_val[i];
        out.data[idx] = a.data[flat_index(a, value)] * b.data[flat_index(b, value)];
        int i = static_cast<int>(out.wires.size()) - 1;
        for (; i >= 0; --i) {
            if (++axis_val[i] < out.dims[i]) break;
            axis_val[i] = 0;
        }
        if (i < 0) break;
    }
    return out;
}

WireTensor sum_out(const WireTensor& t, WireId wire) {
    int axis = -1;
    for (size_t i = 0; i < t.wires.size(); ++i)
        if (t.wires[i] == wire) axis = static_cast<int>(i);
    WireTensor out;
    for (size_t i = 0; i < t.wires.size(); ++i) {
        if (static_cast<int>(i) == axis) continue;
        out.wires.push_back(t.wires[i]);
        out.dims.push_back(t.dims[i]);
    }
    out.data.assign(out.size(), 0.0);
    std::vector<int> axis_val(t.wires.size(), 0);
    for (std::int64_t src = 0; src < t.size(); ++src) {
        std::int64_t idx = 0;
        for (size_t i = 0; i < t.wires.size(); ++i)
            if (static_cast<int>(i) != axis) idx = idx * t.dims[i] + axis_val[i];
        out.data[idx] += t.data[src];
        int i = static_cast<int>(t.wires.size()) - 1;
        for (; i >= 0; --i) {
            if (++axis_val[i] < t.dims[i]) break;
            axis_val[i] = 0;
        }
    }
    return out;
}

}  // namespace

Kernel interpret(const Diagram& d, const Model& m, const Tolerances& tol) {
    if (!(*m.sig == d.sig())) throw Error("interpret: model signature mismatch");
    const Hypergraph& g = d.graph();

    std::vector<char> boundary(g.wire_count(), 0);
    for (WireId w : d.left()) boundary[w] = 1;
    for (WireId w : d.right()) boundary[w] = 1;

    std::vector<WireTensor> tensors;
    tensors.reserve(g.box_count());
    for (const auto& box : g.boxes()) tensors.push_back(box_tensor(g, box, m));

    auto occurrences = [&](WireId w) {
        int n = 0;
        for (const auto& t : tensors)
            if (std::find(t.wires.begin(), t.wires.end(), w) != t.wires.end()) n++;
        return n;
    };
    auto sweep_consumed = [&]() {
        for (auto& t : tensors) {
            for (size_t i = 0; i < t.wires.size();) {
                WireId w = t.wires[i];
                if (!boundary[w] && occurrences(w) == 1) {
                    t = sum_out(t, w);
                    i = 0;  // axes shifted
                } else {
                    ++i;
                }
            }
        }
    };

    sweep_consumed();
    while (tensors.size() > 1) {
        // Greedy smallest-intermediate pair.
        size_t bi = 0, bj = 1;
        std::int64_t best = -1;
        for (size_t i = 0; i < tensors.size(); ++i)
            for (size_t j = i + 1; j < tensors.size(); ++j) {
                std::int64_t sz = 1;
                std::vector<WireId> seen = tensors[i].wires;
                for (size_t a = 0; a < tensors[i].wires.size(); ++a) sz *= tensors[i].dims[a];
                for (size_t a = 0; a < tensors[j].wires.size(); ++a)
                    if (std::find(seen.begin(), seen.end(), tensors[j].wires[a]) == seen.end())
                        sz *= tensors[j].dims[a];
                if (best < 0 || sz < best) {
                    best = sz;
                    bi = i;
                    bj = j;
                }
            }
        WireTensor merged = product(tensors[bi], tensors[bj], g.wire_count());
        tensors.erase(tensors.begin() + bj);
        tensors.erase(tensors.begin() + bi);
        tensors.push_back(std::move(merged));
        sweep_consumed();
    }

    WireTensor final_tensor;
    if (tensors.empty()) {
        final_tensor.data = {1.0};
    } else {
        final_tensor = std::move(tensors.front());
    }

    Factors dom, cod;
    for (WireId w : d.left()) dom.push_back(m.finset(g.wire_type(w)));
    for (WireId w : d.right()) cod.push_back(m.finset(g.wire_type(w)));
    NonnegMatrix out = NonnegMatrix::zeros(dom, cod);

    std::int64_t dom_size = out.dom_size(), cod_size = out.cod_size();
    std::vector<int> value(std::max(g.wire_count(), 1), -1);
    for (std::int64_t x = 0; x < dom_size; ++x) {
        std::fill(value.begin(), value.end(), -1);
        std::int64_t rest = x;
        for (int k = static_cast<int>(d.left().size()) - 1; k >= 0; --k) {
            int card = m.type_cards[g.wire_type(d.left()[k])];
            value[d.left()[k]] = static_cast<int>(rest % card);
            rest /= card;
        }
        for (std::int64_t y = 0; y < cod_size; ++y) {
            // Right-boundary slots demand wire values; clashing demands on a
            // shared wire (the copy diagonal) contribute zero.
            std::vector<int> slot_val(d.right().size());
            std::int64_t yr = y;
            for (int k = static_cast<int>(d.right().size()) - 1; k >= 0; --k) {
                int card = m.type_cards[g.wire_type(d.right()[k])];
                slot_val[k] = static_cast<int>(yr % card);
                yr /= card;
            }
            bool ok = true;
            std::vector<std::pair<WireId, int>> assigned;
            for (size_t k = 0; k < d.right().size(); ++k) {
                WireId w = d.right()[k];
                if (value[w] == -1) {
                    value[w] = slot_val[k];
                    assigned.emplace_back(w, -1);
                } else if (value[w] != slot_val[k]) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                std::int64_t idx = 0;
                for (size_t i = 0; i < final_tensor.wires.size(); ++i)
                    idx = idx * final_tensor.dims[i] + value[final_tensor.wires[i]];
                out.set(x, y, final_tensor.data[idx]);
            }
            for (auto& [w, v] : assigned) value[w] = v;
        }
    }

    // Discardability of the backend forces row-stochastic output; anything
    // else is an evaluator bug.
    for (double s : out.row_sums())
        if (std::abs(s - 1.0) > tol.row)
            throw Error("interpret: non-stochastic result (row sum " + std::to_string(s) + ")");
    return Kernel(std::move(out), tol);
}

SoundnessResult check_trace_soundness(const TracePartition& t, const Model& m,
                                      const Tolerances& tol) {
    if (!is_nonsignalling(t))
        throw SignallingError("trace soundness: diagram is structurally signalling");
    Kernel contracted = interpret(contract(t), m, tol);
    Kernel whole = interpret(t.diagram(), m, tol);
    if (!is_nonsignalling_sem(whole, t.feedback(), t.feedback(), tol))
        throw Error("trace soundness: interpretation of a non-signalling diagram is signalling");
    Kernel traced = causal_trace(whole, t.feedback(), tol);
    double residual = max_abs_diff(contracted, traced);
    return SoundnessResult{residual <= tol.eq, residual, std::move(contracted), std::move(traced)};
}

}  // namespace markov
