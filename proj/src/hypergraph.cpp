#include "markov/hypergraph.hpp"

#include <algorithm>
#include <numeric>

namespace markov {

Signature::Signature(std::vector<std::string> types, std::vector<BoxDecl> boxes)
    : types_(std::move(types)) {
    for (int i = 0; i < static_cast<int>(types_.size()); ++i) {
        if (!type_index_.emplace(types_[i], i).second)
            throw Error("duplicate type name: " + types_[i]);
    }
    boxes_.reserve(boxes.size());
    for (auto& decl : boxes) {
        BoxSig sig;
        sig.name = decl.name;
        auto resolve = [&](const std::vector<std::string>& names) {
            std::vector<TypeId> out;
            out.reserve(names.size());
            for (const auto& n : names) {
                auto it = type_index_.find(n);
                if (it == type_index_.end())
                    throw Error("box " + decl.name + " references undeclared type " + n);
                out.push_back(it->second);
            }
            return out;
        };
        sig.inputs = resolve(decl.inputs);
        sig.outputs = resolve(decl.outputs);
        int id = static_cast<int>(boxes_.size());
        if (!box_index_.emplace(sig.name, id).second)
            throw Error("duplicate box name: " + sig.name);
        boxes_.push_back(std::move(sig));
    }
}

TypeId Signature::type_id(std::string_view name) const {
    auto it = type_index_.find(std::string(name));
    return it == type_index_.end() ? -1 : it->second;
}

int Signature::box_id(std::string_view name) const {
    auto it = box_index_.find(std::string(name));
    return it == box_index_.end() ? -1 : it->second;
}

bool Signature::operator==(const Signature& other) const {
    if (types_ != other.types_) return false;
    if (boxes_.size() != other.boxes_.size()) return false;
    for (size_t i = 0; i < boxes_.size(); ++i) {
        if (boxes_[i].name != other.boxes_[i].name || boxes_[i].inputs != other.boxes_[i].inputs ||
            boxes_[i].outputs != other.boxes_[i].outputs)
            return false;
    }
    return true;
}

Hypergraph::Hypergraph(SignaturePtr sig) : sig_(std::move(sig)) {
    if (!sig_) throw Error("hypergraph requires a signature");
}

WireId Hypergraph::add_wire(TypeId type) {
    if (type < 0 || type >= sig_->type_count()) throw Error("unknown type id");
    wire_types_.push_back(type);
    return static_cast<int>(wire_types_.size()) - 1;
}

BoxId Hypergraph::add_box(int label, std::vector<WireId> inputs, std::vector<WireId> outputs) {
    if (label < 0 || label >= sig_->box_count()) throw Error("unknown box label");
    const auto& in_types = sig_->box_inputs(label);
    const auto& out_types = sig_->box_outputs(label);
    if (inputs.size() != in_types.size() || outputs.size() != out_types.size())
        throw Error("box " + sig_->box_name(label) + ": arity mismatch");
    auto check_ports = [&](const std::vector<WireId>& wires, const std::vector<TypeId>& types) {
        for (size_t i = 0; i < wires.size(); ++i) {
            if (wires[i] < 0 || wires[i] >= wire_count()) throw Error("invalid wire id in port list");
            if (wire_type(wires[i]) != types[i])
                throw Error("box " + sig_->box_name(label) + ": port type mismatch at position " +
                            std::to_string(i));
        }
    };
    check_ports(inputs, in_types);
    check_ports(outputs, out_types);
    boxes_.push_back(Box{label, std::move(inputs), std::move(outputs)});
    return static_cast<int>(boxes_.size()) - 1;
}

bool Hypergraph::well_labelled() const {
    for (const auto& b : boxes_) {
        if (b.label < 0 || b.label >= sig_->box_count()) return false;
        const auto& in_types = sig_->box_inputs(b.label);
        const auto& out_types = sig_->box_outputs(b.label);
        if (b.inputs.size() != in_types.size() || b.outputs.size() != out_types.size()) return false;
        for (size_t i = 0; i < b.inputs.size(); ++i) {
            WireId w = b.inputs[i];
            if (w < 0 || w >= wire_count() || wire_type(w) != in_types[i]) return false;
        }
        for (size_t i = 0; i < b.outputs.size(); ++i) {
            WireId w = b.outputs[i];
            if (w < 0 || w >= wire_count() || wire_type(w) != out_types[i]) return false;
        }
    }
    return true;
}

Coproduct coproduct(const Hypergraph& a, const Hypergraph& b) {
    if (!(a.sig() == b.sig())) throw Error("coproduct: signature mismatch");
    Hypergraph g(a.sig_ptr());
    for (int w = 0; w < a.wire_count(); ++w) g.add_wire(a.wire_type(w));
    for (int w = 0; w < b.wire_count(); ++w) g.add_wire(b.wire_type(w));
    int wire_off = a.wire_count();
    auto shift = [&](std::vector<WireId> ws) {
        for (auto& w : ws) w += wire_off;
        return ws;
    };
    for (const auto& box : a.boxes()) g.add_box(box.label, box.inputs, box.outputs);
    for (const auto& box : b.boxes()) g.add_box(box.label, shift(box.inputs), shift(box.outputs));
    return Coproduct{std::move(g), wire_off, a.box_count()};
}

namespace {

// Plain union-find over dense wire ids.
struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

Quotient quotient_wires(const Hypergraph& g, const std::vector<std::pair<WireId, WireId>>& pairs) {
    UnionFind uf(g.wire_count());
    for (auto [a, b] : pairs) {
        if (a < 0 || a >= g.wire_count() || b < 0 || b >= g.wire_count())
            throw Error("quotient_wires: invalid wire id");
        if (g.wire_type(a) != g.wire_type(b))
            throw Error("quotient_wires: label clash between wires " + std::to_string(a) + " and " +
                        std::to_string(b));
        uf.unite(a, b);
    }
    // Classes are numbered in order of their smallest member.
    std::vector<WireId> wire_map(g.wire_count(), -1);
    Hypergraph out(g.sig_ptr());
    for (int w = 0; w < g.wire_count(); ++w) {
        int root = uf.find(w);
        if (wire_map[root] == -1) wire_map[root] = out.add_wire(g.wire_type(root));
        wire_map[w] = wire_map[root];
    }
    auto remap = [&](std::vector<WireId> ws) {
        for (auto& w : ws) w = wire_map[w];
        return ws;
    };
    for (const auto& box : g.boxes()) out.add_box(box.label, remap(box.inputs), remap(box.outputs));
    return Quotient{std::move(out), std::move(wire_map)};
}

Pushout pushout(const Hypergraph& a, const Hypergraph& b,
                const std::vector<WireId>& c_in_a, const std::vector<WireId>& c_in_b) {
    if (c_in_a.size() != c_in_b.size()) throw Error("pushout: span leg sizes differ");
    auto co = coproduct(a, b);
    std::vector<std::pair<WireId, WireId>> pairs;
    pairs.reserve(c_in_a.size());
    for (size_t k = 0; k < c_in_a.size(); ++k)
        pairs.emplace_back(c_in_a[k], c_in_b[k] + co.wire_offset);
    auto q = quotient_wires(co.graph, pairs);
    std::vector<WireId> from_a(a.wire_count()), from_b(b.wire_count());
    for (int w = 0; w < a.wire_count(); ++w) from_a[w] = q.wire_map[w];
    for (int w = 0; w < b.wire_count(); ++w) from_b[w] = q.wire_map[w + co.wire_offset];
    return Pushout{std::move(q.graph), std::move(from_a), std::move(from_b), co.box_offset};
}

std::vector<TypeId> Cospan::left_types() const {
    std::vector<TypeId> out;
    out.reserve(left.size());
    for (WireId w : left) out.push_back(graph.wire_type(w));
    return out;
}

std::vector<TypeId> Cospan::right_types() const {
    std::vector<TypeId> out;
    out.reserve(right.size());
    for (WireId w : right) out.push_back(graph.wire_type(w));
    return out;
}

}  // namespace markov
