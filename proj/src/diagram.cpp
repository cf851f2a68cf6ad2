#include "markov/diagram.hpp"

#include <algorithm>
#include <sstream>

namespace markov {

std::string Violation::describe() const {
    switch (kind) {
        case Kind::BadBoundary:
            return "boundary references invalid wire " + std::to_string(id);
        case Kind::Cyclic:
            return "cyclic (witness wire " + std::to_string(id) + ")";
        case Kind::NotLeftMonogamous:
            return "wire " + std::to_string(id) + " is not left monogamous";
        case Kind::EliminableBox:
            return "box " + std::to_string(id) + " is eliminable";
    }
    return "unknown violation";
}

namespace {

// Producer count per wire: left-boundary attachments plus box-output slots.
std::vector<int> producer_counts(const Cospan& c) {
    std::vector<int> count(c.graph.wire_count(), 0);
    for (WireId w : c.left) count[w]++;
    for (const auto& box : c.graph.boxes())
        for (WireId w : box.outputs) count[w]++;
    return count;
}

// Directed wire adjacency: w -> v whenever some box has w among its inputs
// and v among its outputs.
std::vector<std::vector<WireId>> wire_successors(const Hypergraph& g) {
    std::vector<std::vector<WireId>> succ(g.wire_count());
    for (const auto& box : g.boxes())
        for (WireId w : box.inputs)
            for (WireId v : box.outputs) succ[w].push_back(v);
    return succ;
}

std::optional<WireId> find_cycle_wire(const Hypergraph& g) {
    auto succ = wire_successors(g);
    enum : char { White, Grey, Black };
    std::vector<char> color(g.wire_count(), White);
    std::vector<std::pair<WireId, size_t>> stack;
    for (WireId start = 0; start < g.wire_count(); ++start) {
        if (color[start] != White) continue;
        stack.push_back({start, 0});
        color[start] = Grey;
        while (!stack.empty()) {
            auto& [w, next] = stack.back();
            if (next < succ[w].size()) {
                WireId v = succ[w][next++];
                if (color[v] == Grey) return v;
                if (color[v] == White) {
                    color[v] = Grey;
                    stack.push_back({v, 0});
                }
            } else {
                color[w] = Black;
                stack.pop_back();
            }
        }
    }
    return std::nullopt;
}

// Occurrence counts of each wire in box input lists / the right boundary.
struct UseCounts {
    std::vector<int> box_in;
    std::vector<int> right;
};

UseCounts use_counts(const Cospan& c) {
    UseCounts u{std::vector<int>(c.graph.wire_count(), 0), std::vector<int>(c.graph.wire_count(), 0)};
    for (const auto& box : c.graph.boxes())
        for (WireId w : box.inputs) u.box_in[w]++;
    for (WireId w : c.right) u.right[w]++;
    return u;
}

bool box_eliminable(const Box& box, const UseCounts& u) {
    for (WireId w : box.outputs)
        if (u.right[w] > 0 || u.box_in[w] > 0) return false;
    return true;
}

// Rebuilds the cospan keeping the marked wires/boxes, with dense ids.
Cospan rebuild(const Cospan& c, const std::vector<char>& keep_wire, const std::vector<char>& keep_box) {
    Hypergraph g(c.graph.sig_ptr());
    std::vector<WireId> wmap(c.graph.wire_count(), -1);
    for (WireId w = 0; w < c.graph.wire_count(); ++w)
        if (keep_wire[w]) wmap[w] = g.add_wire(c.graph.wire_type(w));
    auto remap = [&](const std::vector<WireId>& ws) {
        std::vector<WireId> out;
        out.reserve(ws.size());
        for (WireId w : ws) out.push_back(wmap[w]);
        return out;
    };
    for (BoxId b = 0; b < c.graph.box_count(); ++b)
        if (keep_box[b]) g.add_box(c.graph.box(b).label, remap(c.graph.box(b).inputs),
                                   remap(c.graph.box(b).outputs));
    return Cospan{std::move(g), remap(c.left), remap(c.right)};
}

}  // namespace

std::optional<Violation> Diagram::find_violation(const Cospan& c) {
    for (WireId w : c.left)
        if (w < 0 || w >= c.graph.wire_count())
            return Violation{Violation::Kind::BadBoundary, w};
    for (WireId w : c.right)
        if (w < 0 || w >= c.graph.wire_count())
            return Violation{Violation::Kind::BadBoundary, w};
    if (auto w = find_cycle_wire(c.graph)) return Violation{Violation::Kind::Cyclic, *w};
    auto producers = producer_counts(c);
    for (WireId w = 0; w < c.graph.wire_count(); ++w)
        if (producers[w] != 1) return Violation{Violation::Kind::NotLeftMonogamous, w};
    auto uses = use_counts(c);
    for (BoxId b = 0; b < c.graph.box_count(); ++b)
        if (box_eliminable(c.graph.box(b), uses)) return Violation{Violation::Kind::EliminableBox, b};
    return std::nullopt;
}

Diagram Diagram::validate(Cospan c) {
    if (auto v = find_violation(c)) throw DiagramError(*v);
    return Diagram(std::move(c));
}

std::vector<BoxId> eliminable_boxes(const Cospan& c) {
    auto uses = use_counts(c);
    std::vector<BoxId> out;
    for (BoxId b = 0; b < c.graph.box_count(); ++b)
        if (box_eliminable(c.graph.box(b), uses)) out.push_back(b);
    return out;
}

Cospan eliminate_box(const Cospan& c, BoxId b) {
    auto uses = use_counts(c);
    if (b < 0 || b >= c.graph.box_count() || !box_eliminable(c.graph.box(b), uses))
        throw Error("eliminate_box: box is not eliminable");
    std::vector<char> keep_wire(c.graph.wire_count(), 1);
    std::vector<char> keep_box(c.graph.box_count(), 1);
    keep_box[b] = 0;
    // Output wires of an eliminable box are referenced nowhere else.
    for (WireId w : c.graph.box(b).outputs) keep_wire[w] = 0;
    return rebuild(c, keep_wire, keep_box);
}

Diagram normalize(Cospan c) {
    for (WireId w : c.left)
        if (w < 0 || w >= c.graph.wire_count())
            throw DiagramError(Violation{Violation::Kind::BadBoundary, w});
    for (WireId w : c.right)
        if (w < 0 || w >= c.graph.wire_count())
            throw DiagramError(Violation{Violation::Kind::BadBoundary, w});
    if (auto w = find_cycle_wire(c.graph)) throw DiagramError(Violation{Violation::Kind::Cyclic, *w});
    auto producers = producer_counts(c);
    for (WireId w = 0; w < c.graph.wire_count(); ++w)
        if (producers[w] != 1) throw DiagramError(Violation{Violation::Kind::NotLeftMonogamous, w});

    Cospan cur = std::move(c);
    for (;;) {
        auto uses = use_counts(cur);
        std::vector<char> keep_wire(cur.graph.wire_count(), 1);
        std::vector<char> keep_box(cur.graph.box_count(), 1);
        bool any = false;
        for (BoxId b = 0; b < cur.graph.box_count(); ++b) {
            if (box_eliminable(cur.graph.box(b), uses)) {
                any = true;
                keep_box[b] = 0;
                for (WireId w : cur.graph.box(b).outputs) keep_wire[w] = 0;
            }
        }
        if (!any) break;
        cur = rebuild(cur, keep_wire, keep_box);
    }
    return Diagram::validate(std::move(cur));
}

Diagram compose(const Diagram& f, const Diagram& g) {
    if (!(f.sig() == g.sig())) throw Error("compose: signature mismatch");
    if (f.right_types() != g.left_types()) throw Error("compose: boundary type mismatch");
    auto po = pushout(f.graph(), g.graph(), f.right(), g.left());
    std::vector<WireId> left;
    left.reserve(f.left().size());
    for (WireId w : f.left()) left.push_back(po.from_a[w]);
    std::vector<WireId> right;
    right.reserve(g.right().size());
    for (WireId w : g.right()) right.push_back(po.from_b[w]);
    return normalize(Cospan{std::move(po.graph), std::move(left), std::move(right)});
}

Diagram tensor(const Diagram& f, const Diagram& g) {
    if (!(f.sig() == g.sig())) throw Error("tensor: signature mismatch");
    auto co = coproduct(f.graph(), g.graph());
    std::vector<WireId> left = f.left();
    for (WireId w : g.left()) left.push_back(w + co.wire_offset);
    std::vector<WireId> right = f.right();
    for (WireId w : g.right()) right.push_back(w + co.wire_offset);
    return Diagram::validate(Cospan{std::move(co.graph), std::move(left), std::move(right)});
}

Diagram identity(SignaturePtr sig, const std::vector<TypeId>& types) {
    Hypergraph g(std::move(sig));
    std::vector<WireId> ws;
    ws.reserve(types.size());
    for (TypeId t : types) ws.push_back(g.add_wire(t));
    return Diagram::validate(Cospan{std::move(g), ws, ws});
}

Diagram swap_diagram(SignaturePtr sig, const std::vector<TypeId>& a, const std::vector<TypeId>& b) {
    Hypergraph g(std::move(sig));
    std::vector<WireId> wa, wb;
    for (TypeId t : a) wa.push_back(g.add_wire(t));
    for (TypeId t : b) wb.push_back(g.add_wire(t));
    std::vector<WireId> left = wa, right = wb;
    left.insert(left.end(), wb.begin(), wb.end());
    right.insert(right.end(), wa.begin(), wa.end());
    return Diagram::validate(Cospan{std::move(g), std::move(left), std::move(right)});
}

Diagram copy_diagram(SignaturePtr sig, const std::vector<TypeId>& types) {
    Hypergraph g(std::move(sig));
    std::vector<WireId> ws;
    for (TypeId t : types) ws.push_back(g.add_wire(t));
    std::vector<WireId> right = ws;
    right.insert(right.end(), ws.begin(), ws.end());
    return Diagram::validate(Cospan{std::move(g), ws, std::move(right)});
}

Diagram del_diagram(SignaturePtr sig, const std::vector<TypeId>& types) {
    Hypergraph g(std::move(sig));
    std::vector<WireId> ws;
    for (TypeId t : types) ws.push_back(g.add_wire(t));
    return Diagram::validate(Cospan{std::move(g), std::move(ws), {}});
}

Diagram box_diagram(SignaturePtr sig, int label) {
    if (label < 0 || label >= sig->box_count()) throw Error("box_diagram: unknown box");
    Hypergraph g(sig);
    std::vector<WireId> ins, outs;
    for (TypeId t : sig->box_inputs(label)) ins.push_back(g.add_wire(t));
    for (TypeId t : sig->box_outputs(label)) outs.push_back(g.add_wire(t));
    g.add_box(label, ins, outs);
    // A box with no outputs is eliminable by definition, so its diagram
    // normalizes to plain deletion (morphisms into the unit all coincide).
    return normalize(Cospan{std::move(g), std::move(ins), std::move(outs)});
}

Diagram box_diagram(SignaturePtr sig, std::string_view name) {
    int label = sig->box_id(name);
    if (label < 0) throw Error("box_diagram: unknown box " + std::string(name));
    return box_diagram(std::move(sig), label);
}

Diagram empty_diagram(SignaturePtr sig) {
    Hypergraph g(std::move(sig));
    return Diagram::validate(Cospan{std::move(g), {}, {}});
}

namespace {

// Canonical labelling. Every wire has exactly one producer (a left-boundary
// port or a box output slot), so a linear order on the boxes induces a full
// wire numbering: left-boundary wires first, then each chosen box's outputs.
// The canonical form is the lexicographically least serialization over all
// topological box orders. Candidates at each step are the boxes whose input
// wires are already numbered; only candidates with identical (label, inputs)
// chunks can tie, so the search branches only on genuine automorphism choices.
struct CanonicalSearch {
    const Cospan& c;
    std::vector<int> wire_id;
    std::vector<char> used;
    std::vector<int> order;
    std::vector<int> tokens;
    std::vector<int> best_tokens;
    std::vector<int> best_order;
    bool have_best = false;
    int next_wire = 0;

    explicit CanonicalSearch(const Cospan& cospan)
        : c(cospan), wire_id(cospan.graph.wire_count(), -1), used(cospan.graph.box_count(), 0) {
        for (WireId w : c.left) wire_id[w] = next_wire++;
    }

    std::vector<int> chunk(BoxId b) const {
        const auto& box = c.graph.box(b);
        std::vector<int> out;
        out.reserve(1 + box.inputs.size());
        out.push_back(box.label);
        for (WireId w : box.inputs) out.push_back(wire_id[w]);
        return out;
    }

    bool ready(BoxId b) const {
        for (WireId w : c.graph.box(b).inputs)
            if (wire_id[w] < 0) return false;
        return true;
    }

    void finish() {
        std::vector<int> full = tokens;
        for (WireId w : c.right) full.push_back(wire_id[w]);
        if (!have_best || full < best_tokens) {
            best_tokens = std::move(full);
            best_order = order;
            have_best = true;
        }
    }

    void search() {
        std::vector<BoxId> candidates;
        for (BoxId b = 0; b < c.graph.box_count(); ++b)
            if (!used[b] && ready(b)) candidates.push_back(b);
        if (candidates.empty()) {
            finish();
            return;
        }
        std::vector<int> min_chunk;
        for (BoxId b : candidates) {
            auto ch = chunk(b);
            if (min_chunk.empty() || ch < min_chunk) min_chunk = std::move(ch);
        }
        for (BoxId b : candidates) {
            if (chunk(b) != min_chunk) continue;
            used[b] = 1;
            order.push_back(b);
            size_t token_mark = tokens.size();
            tokens.insert(tokens.end(), min_chunk.begin(), min_chunk.end());
            int wire_mark = next_wire;
            for (WireId w : c.graph.box(b).outputs) wire_id[w] = next_wire++;
            search();
            for (WireId w : c.graph.box(b).outputs) wire_id[w] = -1;
            next_wire = wire_mark;
            tokens.resize(token_mark);
            order.pop_back();
            used[b] = 0;
        }
    }
};

CanonicalSearch run_canonical_search(const Diagram& d) {
    CanonicalSearch s(d.cospan());
    s.search();
    return s;
}

}  // namespace

std::string canonical_form(const Diagram& d) {
    auto s = run_canonical_search(d);
    const auto& sig = d.sig();
    std::ostringstream out;
    out << "L[";
    for (size_t i = 0; i < d.left().size(); ++i) {
        if (i) out << ",";
        out << sig.type_name(d.graph().wire_type(d.left()[i]));
    }
    out << "]";
    std::vector<int> wire_id(d.graph().wire_count(), -1);
    int next = 0;
    for (WireId w : d.left()) wire_id[w] = next++;
    for (BoxId b : s.best_order) {
        const auto& box = d.graph().box(b);
        out << " " << sig.box_name(box.label) << "(";
        for (size_t i = 0; i < box.inputs.size(); ++i) {
            if (i) out << ",";
            out << wire_id[box.inputs[i]];
        }
        out << ")";
        for (WireId w : box.outputs) wire_id[w] = next++;
    }
    out << " R[";
    for (size_t i = 0; i < d.right().size(); ++i) {
        if (i) out << ",";
        out << wire_id[d.right()[i]];
    }
    out << "]";
    return out.str();
}

std::vector<BoxId> canonical_box_order(const Diagram& d) {
    return run_canonical_search(d).best_order;
}

bool equal(const Diagram& a, const Diagram& b) {
    if (!(a.sig() == b.sig())) return false;
    return canonical_form(a) == canonical_form(b);
}

}  // namespace markov
