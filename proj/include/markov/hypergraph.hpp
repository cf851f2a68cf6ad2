#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace markov {

using WireId = int;
using BoxId = int;
using TypeId = int;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Box declaration in a signature: name plus ordered input/output type lists.
struct BoxDecl {
    std::string name;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
};

/// A monoidal signature: named types and named boxes with typed arities.
/// Type and box names are unique; every type referenced by a box is declared.
class Signature {
public:
    Signature(std::vector<std::string> types, std::vector<BoxDecl> boxes);

    int type_count() const { return static_cast<int>(types_.size()); }
    int box_count() const { return static_cast<int>(boxes_.size()); }

    TypeId type_id(std::string_view name) const;  // -1 if unknown
    int box_id(std::string_view name) const;      // -1 if unknown
    const std::string& type_name(TypeId t) const { return types_.at(t); }
    const std::string& box_name(int b) const { return boxes_.at(b).name; }
    const std::vector<TypeId>& box_inputs(int b) const { return boxes_.at(b).inputs; }
    const std::vector<TypeId>& box_outputs(int b) const { return boxes_.at(b).outputs; }

    bool operator==(const Signature& other) const;

private:
    struct BoxSig {
        std::string name;
        std::vector<TypeId> inputs;
        std::vector<TypeId> outputs;
    };
    std::vector<std::string> types_;
    std::vector<BoxSig> boxes_;
    std::unordered_map<std::string, TypeId> type_index_;
    std::unordered_map<std::string, int> box_index_;
};

using SignaturePtr = std::shared_ptr<const Signature>;

/// A box occurrence: signature label plus ordered input/output wire lists.
struct Box {
    int label;
    std::vector<WireId> inputs;
    std::vector<WireId> outputs;
};

/// Finite hypergraph labelled over a signature. Wire and box ids are dense
/// integers starting at 0. The labelling invariant (port types match the
/// declared type lists position-wise) is enforced at construction time.
class Hypergraph {
public:
    explicit Hypergraph(SignaturePtr sig);

    WireId add_wire(TypeId type);
    BoxId add_box(int label, std::vector<WireId> inputs, std::vector<WireId> outputs);

    int wire_count() const { return static_cast<int>(wire_types_.size()); }
    int box_count() const { return static_cast<int>(boxes_.size()); }
    TypeId wire_type(WireId w) const { return wire_types_.at(w); }
    const Box& box(BoxId b) const { return boxes_.at(b); }
    const std::vector<Box>& boxes() const { return boxes_; }

    const Signature& sig() const { return *sig_; }
    const SignaturePtr& sig_ptr() const { return sig_; }

    /// Re-checks the labelling homomorphism invariant from scratch.
    bool well_labelled() const;

private:
    SignaturePtr sig_;
    std::vector<TypeId> wire_types_;
    std::vector<Box> boxes_;
};

/// Disjoint union. Wires/boxes of `a` keep their ids; ids of `b` are shifted
/// by the recorded offsets, which encode the two coproduct injections.
struct Coproduct {
    Hypergraph graph;
    int wire_offset;
    int box_offset;
};
Coproduct coproduct(const Hypergraph& a, const Hypergraph& b);

/// Wire quotient. `wire_map[w]` is the id of w's class in the quotient graph;
/// box ids and order are unchanged.
struct Quotient {
    Hypergraph graph;
    std::vector<WireId> wire_map;
};

/// Identifies the paired wires (union-find closure) and rewrites all port
/// lists through the class map. Paired wires must carry equal type labels.
Quotient quotient_wires(const Hypergraph& g, const std::vector<std::pair<WireId, WireId>>& pairs);

/// Pushout of a span A <- C -> B where C is a discrete hypergraph given by
/// its images in A and B: wire k of C maps to c_in_a[k] / c_in_b[k].
struct Pushout {
    Hypergraph graph;
    std::vector<WireId> from_a;  // wire map A -> pushout
    std::vector<WireId> from_b;  // wire map B -> pushout
    int box_offset;              // boxes of b are shifted by this
};
Pushout pushout(const Hypergraph& a, const Hypergraph& b,
                const std::vector<WireId>& c_in_a, const std::vector<WireId>& c_in_b);

/// Cospan m -> G <- n of labelled hypergraphs with discrete boundaries,
/// encoded as ordered wire lists (the images of the boundary ports).
struct Cospan {
    Hypergraph graph;
    std::vector<WireId> left;
    std::vector<WireId> right;

    std::vector<TypeId> left_types() const;
    std::vector<TypeId> right_types() const;
};

}  // namespace markov
