#pragma once

#include <optional>
#include <string>
#include <vector>

#include "markov/hypergraph.hpp"

namespace markov {

/// Which well-formedness condition a cospan violates, and where.
struct Violation {
    enum class Kind { BadBoundary, Cyclic, NotLeftMonogamous, EliminableBox };
    Kind kind;
    int id;  // offending wire (NotLeftMonogamous) or box (EliminableBox, Cyclic witness)
    std::string describe() const;
};

class DiagramError : public Error {
public:
    explicit DiagramError(Violation v) : Error(v.describe()), violation(v) {}
    Violation violation;
};

/// A Markov string diagram: a cospan that is acyclic, left monogamous, and
/// has no eliminable boxes. Equality of diagrams is equality of canonical
/// forms (boundary-preserving labelled isomorphism); the stored ids are one
/// arbitrary representative of the isomorphism class.
class Diagram {
public:
    /// Checks all diagram conditions; throws DiagramError on failure.
    static Diagram validate(Cospan c);

    /// nullopt when `c` is a valid diagram, else the first violation found
    /// (boundary, then acyclicity, then monogamy, then eliminability).
    static std::optional<Violation> find_violation(const Cospan& c);

    const Cospan& cospan() const { return c_; }
    const Hypergraph& graph() const { return c_.graph; }
    const std::vector<WireId>& left() const { return c_.left; }
    const std::vector<WireId>& right() const { return c_.right; }
    std::vector<TypeId> left_types() const { return c_.left_types(); }
    std::vector<TypeId> right_types() const { return c_.right_types(); }
    const Signature& sig() const { return c_.graph.sig(); }

private:
    explicit Diagram(Cospan c) : c_(std::move(c)) {}
    Cospan c_;
};

/// Eliminates eliminable boxes (and their orphaned output wires) to fixpoint,
/// then validates. The cospan must already be acyclic and left monogamous.
Diagram normalize(Cospan c);

/// Removes one specific eliminable box. Building block for normalize; also
/// lets tests replay every elimination order.
Cospan eliminate_box(const Cospan& c, BoxId b);

/// Boxes currently eliminable in `c` (no output wire is connected to an
/// output port or a box input).
std::vector<BoxId> eliminable_boxes(const Cospan& c);

/// Sequential composition f ; g (pushout along f's right boundary and g's
/// left boundary, then normalization).
Diagram compose(const Diagram& f, const Diagram& g);

/// Monoidal product (coproduct of apexes, boundaries concatenated).
Diagram tensor(const Diagram& f, const Diagram& g);

// Structural generators.
Diagram identity(SignaturePtr sig, const std::vector<TypeId>& types);
Diagram swap_diagram(SignaturePtr sig, const std::vector<TypeId>& a, const std::vector<TypeId>& b);
Diagram copy_diagram(SignaturePtr sig, const std::vector<TypeId>& types);
Diagram del_diagram(SignaturePtr sig, const std::vector<TypeId>& types);
Diagram box_diagram(SignaturePtr sig, int label);
Diagram box_diagram(SignaturePtr sig, std::string_view name);
Diagram empty_diagram(SignaturePtr sig);

/// Canonical byte string: equal strings iff the diagrams are isomorphic as
/// boundary-preserving labelled cospans. Stable across runs of one build;
/// not guaranteed stable across versions.
std::string canonical_form(const Diagram& d);

/// The box order realizing the canonical form (used for deterministic
/// rendering and printing). Empty for box-free diagrams.
std::vector<BoxId> canonical_box_order(const Diagram& d);

bool equal(const Diagram& a, const Diagram& b);

}  // namespace markov
