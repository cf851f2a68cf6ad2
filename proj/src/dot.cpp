#include "markov/dot.hpp"

#include <sstream>

namespace markov {

namespace {

struct Endpoint {
    std::string node;
    int slot;  // output-port index on a multi-output box, -1 otherwise
};

}  // namespace

std::string to_dot(const Diagram& d, const std::string& name) {
    const Hypergraph& g = d.graph();
    const Signature& sig = g.sig();
    auto order = canonical_box_order(d);
    std::vector<int> box_pos(g.box_count(), -1);
    for (size_t i = 0; i < order.size(); ++i) box_pos[order[i]] = static_cast<int>(i);

    // Producer endpoint per wire.
    std::vector<Endpoint> producer(g.wire_count());
    for (size_t i = 0; i < d.left().size(); ++i)
        producer[d.left()[i]] = Endpoint{"in" + std::to_string(i), -1};
    for (BoxId b = 0; b < g.box_count(); ++b) {
        const Box& box = g.box(b);
        for (size_t j = 0; j < box.outputs.size(); ++j)
            producer[box.outputs[j]] = Endpoint{
                "b" + std::to_string(box_pos[b]),
                box.outputs.size() > 1 ? static_cast<int>(j) : -1};
    }

    std::ostringstream out;
    out << "digraph \"" << name << "\" {\n";
    out << "  rankdir=LR;\n";
    for (size_t i = 0; i < d.left().size(); ++i)
        out << "  in" << i << " [shape=plaintext, label=\""
            << sig.type_name(g.wire_type(d.left()[i])) << "\"];\n";
    for (size_t i = 0; i < order.size(); ++i)
        out << "  b" << i << " [shape=box, label=\"" << sig.box_name(g.box(order[i]).label)
            << "\"];\n";
    for (size_t k = 0; k < d.right().size(); ++k)
        out << "  out" << k << " [shape=plaintext, label=\""
            << sig.type_name(g.wire_type(d.right()[k])) << "\"];\n";

    // Dangling wires get point terminators, numbered by producer order.
    std::vector<int> consumer_count(g.wire_count(), 0);
    for (const auto& box : g.boxes())
        for (WireId w : box.inputs) consumer_count[w]++;
    for (WireId w : d.right()) consumer_count[w]++;
    std::vector<int> terminator(g.wire_count(), -1);
    // Wires in canonical producer order: left boundary, then each box's
    // outputs following the canonical box order.
    std::vector<WireId> producer_order = d.left();
    for (BoxId b : order) {
        const auto& outs = g.box(b).outputs;
        producer_order.insert(producer_order.end(), outs.begin(), outs.end());
    }
    std::vector<WireId> dangling;
    for (WireId w : producer_order)
        if (consumer_count[w] == 0) dangling.push_back(w);
    for (size_t i = 0; i < dangling.size(); ++i) {
        terminator[dangling[i]] = static_cast<int>(i);
        out << "  t" << i << " [shape=point];\n";
    }

    if (!d.left().empty()) {
        out << "  { rank=source;";
        for (size_t i = 0; i < d.left().size(); ++i) out << " in" << i << ";";
        out << " }\n";
    }
    if (!d.right().empty()) {
        out << "  { rank=sink;";
        for (size_t k = 0; k < d.right().size(); ++k) out << " out" << k << ";";
        out << " }\n";
    }

    auto edge = [&](WireId w, const std::string& to, int head_slot) {
        const Endpoint& p = producer[w];
        out << "  " << p.node << " -> " << to << " [label=\""
            << sig.type_name(g.wire_type(w)) << "\"";
        if (p.slot >= 0) out << ", taillabel=\"" << p.slot << "\"";
        if (head_slot >= 0) out << ", headlabel=\"" << head_slot << "\"";
        out << "];\n";
    };

    // Edges to box inputs (canonical order), then to output ports, then
    // terminators for dangling wires.
    for (size_t i = 0; i < order.size(); ++i) {
        const Box& box = g.box(order[i]);
        for (size_t j = 0; j < box.inputs.size(); ++j)
            edge(box.inputs[j], "b" + std::to_string(i),
                 box.inputs.size() > 1 ? static_cast<int>(j) : -1);
    }
    for (size_t k = 0; k < d.right().size(); ++k)
        edge(d.right()[k], "out" + std::to_string(k), -1);
    for (WireId w : dangling) edge(w, "t" + std::to_string(terminator[w]), -1);

    out << "}\n";
    return out.str();
}

}  // namespace markov
