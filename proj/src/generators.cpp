#include "markov/generators.hpp"

#include <algorithm>
#include <numeric>

namespace markov {

int rand_int(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double rand_unit(std::mt19937_64& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

Factors random_factors(std::mt19937_64& rng, int min_count, int max_count, int min_card,
                       int max_card, const std::string& prefix) {
    int n = rand_int(rng, min_count, max_count);
    Factors out;
    for (int i = 0; i < n; ++i)
        out.emplace_back(prefix + std::to_string(i), rand_int(rng, min_card, max_card));
    return out;
}

Kernel random_kernel(std::mt19937_64& rng, Factors dom, Factors cod) {
    std::int64_t rows = total_card(dom), cols = total_card(cod);
    std::vector<double> entries(rows * cols);
    for (std::int64_t x = 0; x < rows; ++x) {
        double sum = 0.0;
        for (std::int64_t y = 0; y < cols; ++y) {
            double v = rand_unit(rng) + 1e-3;
            entries[x * cols + y] = v;
            sum += v;
        }
        for (std::int64_t y = 0; y < cols; ++y) entries[x * cols + y] /= sum;
    }
    return Kernel(std::move(dom), std::move(cod), std::move(entries));
}

Kernel random_sparse_kernel(std::mt19937_64& rng, Factors dom, Factors cod) {
    std::int64_t rows = total_card(dom), cols = total_card(cod);
    std::vector<double> entries(rows * cols, 0.0);
    for (std::int64_t x = 0; x < rows; ++x) {
        double sum = 0.0;
        std::int64_t forced = rand_int(rng, 0, static_cast<int>(cols) - 1);
        for (std::int64_t y = 0; y < cols; ++y) {
            bool keep = (y == forced) || rand_unit(rng) < 0.5;
            double v = keep ? rand_unit(rng) + 1e-3 : 0.0;
            entries[x * cols + y] = v;
            sum += v;
        }
        for (std::int64_t y = 0; y < cols; ++y) entries[x * cols + y] /= sum;
    }
    return Kernel(std::move(dom), std::move(cod), std::move(entries));
}

Kernel random_deterministic_kernel(std::mt19937_64& rng, Factors dom, Factors cod) {
    std::int64_t rows = total_card(dom), cols = total_card(cod);
    std::vector<double> entries(rows * cols, 0.0);
    for (std::int64_t x = 0; x < rows; ++x)
        entries[x * cols + rand_int(rng, 0, static_cast<int>(cols) - 1)] = 1.0;
    return Kernel(std::move(dom), std::move(cod), std::move(entries));
}

NsKernel random_nonsignalling(std::mt19937_64& rng, Factors x, Factors w_in, Factors y,
                              Factors w_out, bool sparse_marginal) {
    Kernel w_marginal = sparse_marginal ? random_sparse_kernel(rng, x, w_out)
                                        : random_kernel(rng, x, w_out);
    Kernel remainder =
        random_kernel(rng, concat_factors(w_out, concat_factors(x, w_in)), y);
    Kernel f = recompose(w_marginal, remainder);
    return NsKernel{std::move(f), std::move(w_marginal), std::move(remainder)};
}

SignaturePtr random_signature(std::mt19937_64& rng) {
    int type_count = rand_int(rng, 1, 3);
    std::vector<std::string> types;
    for (int i = 0; i < type_count; ++i) types.push_back(std::string(1, static_cast<char>('X' + i)));
    int box_count = rand_int(rng, 2, 4);
    std::vector<BoxDecl> boxes;
    for (int i = 0; i < box_count; ++i) {
        BoxDecl decl;
        decl.name = std::string(1, static_cast<char>('f' + i));
        int ins = rand_int(rng, 0, 2);
        int outs = rand_int(rng, i == 0 ? 1 : 0, 2);  // keep at least one producer around
        for (int k = 0; k < ins; ++k) decl.inputs.push_back(types[rand_int(rng, 0, type_count - 1)]);
        for (int k = 0; k < outs; ++k) decl.outputs.push_back(types[rand_int(rng, 0, type_count - 1)]);
        boxes.push_back(std::move(decl));
    }
    return std::make_shared<Signature>(std::move(types), std::move(boxes));
}

SignaturePtr law_signature() {
    static SignaturePtr sig = std::make_shared<Signature>(
        std::vector<std::string>{"X", "Y"},
        std::vector<BoxDecl>{
            {"f", {"X"}, {"X"}},
            {"g", {"X"}, {"Y"}},
            {"h", {"X", "Y"}, {"X"}},
            {"k", {"Y"}, {"X", "X"}},
            {"u", {}, {"X"}},
            {"v", {}, {"Y"}},
            {"e", {"X"}, {}},
        });
    return sig;
}

namespace {

// Adds a no-input box producing the requested type, if the signature has one.
std::optional<WireId> add_state_wire(Hypergraph& g, TypeId t) {
    const Signature& sig = g.sig();
    for (int b = 0; b < sig.box_count(); ++b) {
        if (!sig.box_inputs(b).empty()) continue;
        const auto& outs = sig.box_outputs(b);
        auto it = std::find(outs.begin(), outs.end(), t);
        if (it == outs.end()) continue;
        std::vector<WireId> wires;
        for (TypeId ot : outs) wires.push_back(g.add_wire(ot));
        g.add_box(b, {}, wires);
        return wires[it - outs.begin()];
    }
    return std::nullopt;
}

}  // namespace

Cospan random_cospan(std::mt19937_64& rng, SignaturePtr sig, const DiagramOptions& opts) {
    Hypergraph g(sig);
    std::vector<TypeId> left_types;
    if (opts.left_types) {
        left_types = *opts.left_types;
    } else {
        int m = rand_int(rng, 0, 3);
        for (int i = 0; i < m; ++i) left_types.push_back(rand_int(rng, 0, sig->type_count() - 1));
    }
    std::vector<WireId> left;
    for (TypeId t : left_types) left.push_back(g.add_wire(t));

    std::vector<std::vector<WireId>> by_type(sig->type_count());
    for (WireId w : left) by_type[g.wire_type(w)].push_back(w);
    auto register_outputs = [&](BoxId b) {
        for (WireId w : g.box(b).outputs) by_type[g.wire_type(w)].push_back(w);
    };

    int boxes = rand_int(rng, 0, opts.max_boxes);
    for (int i = 0; i < boxes && g.wire_count() < opts.max_wires; ++i) {
        // Pick a box whose input types all have candidate wires.
        std::vector<int> feasible;
        for (int b = 0; b < sig->box_count(); ++b) {
            bool ok = true;
            for (TypeId t : sig->box_inputs(b))
                if (by_type[t].empty()) ok = false;
            if (ok && g.wire_count() + static_cast<int>(sig->box_outputs(b).size()) <= opts.max_wires)
                feasible.push_back(b);
        }
        if (feasible.empty()) break;
        int label = feasible[rand_int(rng, 0, static_cast<int>(feasible.size()) - 1)];
        std::vector<WireId> ins, outs;
        for (TypeId t : sig->box_inputs(label)) {
            const auto& cands = by_type[t];
            ins.push_back(cands[rand_int(rng, 0, static_cast<int>(cands.size()) - 1)]);
        }
        for (TypeId t : sig->box_outputs(label)) outs.push_back(g.add_wire(t));
        g.add_box(label, ins, std::move(outs));
        register_outputs(g.box_count() - 1);
    }

    std::vector<WireId> right;
    if (opts.right_types) {
        for (TypeId t : *opts.right_types) {
            if (by_type[t].empty()) {
                auto w = add_state_wire(g, t);
                if (!w) throw Error("random_cospan: no wire available for right type");
                register_outputs(g.box_count() - 1);
            }
            right.push_back(by_type[t][rand_int(rng, 0, static_cast<int>(by_type[t].size()) - 1)]);
        }
    } else {
        int n = rand_int(rng, 0, 4);
        for (int i = 0; i < n && g.wire_count() > 0; ++i)
            right.push_back(rand_int(rng, 0, g.wire_count() - 1));
    }
    return Cospan{std::move(g), std::move(left), std::move(right)};
}

Diagram random_diagram(std::mt19937_64& rng, SignaturePtr sig, const DiagramOptions& opts) {
    return normalize(random_cospan(rng, sig, opts));
}

Diagram permuted_copy(const Diagram& d, std::mt19937_64& rng) {
    const Hypergraph& g = d.graph();
    std::vector<int> wire_new(g.wire_count());
    std::iota(wire_new.begin(), wire_new.end(), 0);
    std::shuffle(wire_new.begin(), wire_new.end(), rng);
    std::vector<int> wire_old(g.wire_count());
    for (int w = 0; w < g.wire_count(); ++w) wire_old[wire_new[w]] = w;
    std::vector<int> box_order(g.box_count());
    std::iota(box_order.begin(), box_order.end(), 0);
    std::shuffle(box_order.begin(), box_order.end(), rng);

    Hypergraph out(g.sig_ptr());
    for (int w = 0; w < g.wire_count(); ++w) out.add_wire(g.wire_type(wire_old[w]));
    auto remap = [&](const std::vector<WireId>& ws) {
        std::vector<WireId> r;
        r.reserve(ws.size());
        for (WireId w : ws) r.push_back(wire_new[w]);
        return r;
    };
    for (BoxId b : box_order) out.add_box(g.box(b).label, remap(g.box(b).inputs), remap(g.box(b).outputs));
    return Diagram::validate(Cospan{std::move(out), remap(d.left()), remap(d.right())});
}

std::optional<TracePartition> random_trace_partition(std::mt19937_64& rng, SignaturePtr sig,
                                                     int feedback, const DiagramOptions& opts) {
    for (int attempt = 0; attempt < 40; ++attempt) {
        std::vector<TypeId> left_types;
        int m = rand_int(rng, 0, 2);
        for (int i = 0; i < m + feedback; ++i)
            left_types.push_back(rand_int(rng, 0, sig->type_count() - 1));
        DiagramOptions local = opts;
        local.left_types = left_types;
        local.right_types = std::nullopt;
        Diagram d = random_diagram(rng, sig, local);
        const auto& g = d.graph();

        // Wires reachable from the feedback inputs cannot close the loop.
        std::vector<char> reach(g.wire_count(), 0);
        std::vector<WireId> stack;
        for (int k = 0; k < feedback; ++k) {
            WireId w = d.left()[m + k];
            if (!reach[w]) {
                reach[w] = 1;
                stack.push_back(w);
            }
        }
        while (!stack.empty()) {
            WireId w = stack.back();
            stack.pop_back();
            for (const auto& box : g.boxes()) {
                if (std::find(box.inputs.begin(), box.inputs.end(), w) == box.inputs.end()) continue;
                for (WireId v : box.outputs)
                    if (!reach[v]) {
                        reach[v] = 1;
                        stack.push_back(v);
                    }
            }
        }
        Hypergraph graph = d.graph();
        std::vector<WireId> w_out;
        bool ok = true;
        for (int k = 0; k < feedback; ++k) {
            TypeId t = graph.wire_type(d.left()[m + k]);
            std::vector<WireId> cands;
            for (WireId w = 0; w < static_cast<int>(reach.size()); ++w)
                if (!reach[w] && graph.wire_type(w) == t) cands.push_back(w);
            for (WireId w = static_cast<int>(reach.size()); w < graph.wire_count(); ++w)
                if (graph.wire_type(w) == t) cands.push_back(w);  // fresh state wires
            if (cands.empty()) {
                // A fresh state wire can never be reachable from the inputs.
                auto fresh = add_state_wire(graph, t);
                if (!fresh) {
                    ok = false;
                    break;
                }
                cands.push_back(*fresh);
            }
            w_out.push_back(cands[rand_int(rng, 0, static_cast<int>(cands.size()) - 1)]);
        }
        if (!ok) continue;
        std::vector<WireId> right = d.right();
        right.insert(right.end(), w_out.begin(), w_out.end());
        Diagram with_fb = Diagram::validate(Cospan{std::move(graph), d.left(), std::move(right)});
        TracePartition t(std::move(with_fb), feedback);
        if (is_nonsignalling(t)) return t;
    }
    return std::nullopt;
}

Model random_model(std::mt19937_64& rng, SignaturePtr sig, int max_card) {
    std::vector<int> cards;
    for (int t = 0; t < sig->type_count(); ++t) cards.push_back(rand_int(rng, 1, max_card));
    auto factors_of = [&](const std::vector<TypeId>& ts) {
        Factors out;
        for (TypeId t : ts) out.emplace_back(sig->type_name(t), cards[t]);
        return out;
    };
    std::vector<Kernel> kernels;
    for (int b = 0; b < sig->box_count(); ++b)
        kernels.push_back(
            random_kernel(rng, factors_of(sig->box_inputs(b)), factors_of(sig->box_outputs(b))));
    return Model(sig, std::move(cards), std::move(kernels));
}

}  // namespace markov
