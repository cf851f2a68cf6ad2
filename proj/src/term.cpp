#include "markov/term.hpp"

#include <algorithm>

namespace markov {

namespace {

TermPtr make(Term t) { return std::make_shared<const Term>(std::move(t)); }

}  // namespace

TermPtr term_id(std::vector<std::string> types, SourceLoc loc) {
    return make(Term{Term::Kind::Id, std::move(types), {}, {}, nullptr, nullptr, loc});
}
TermPtr term_swap(std::vector<std::string> a, std::vector<std::string> b, SourceLoc loc) {
    return make(Term{Term::Kind::Swap, std::move(a), std::move(b), {}, nullptr, nullptr, loc});
}
TermPtr term_copy(std::vector<std::string> types, SourceLoc loc) {
    return make(Term{Term::Kind::Copy, std::move(types), {}, {}, nullptr, nullptr, loc});
}
TermPtr term_del(std::vector<std::string> types, SourceLoc loc) {
    return make(Term{Term::Kind::Del, std::move(types), {}, {}, nullptr, nullptr, loc});
}
TermPtr term_name(std::string name, SourceLoc loc) {
    return make(Term{Term::Kind::Name, {}, {}, std::move(name), nullptr, nullptr, loc});
}
TermPtr term_seq(TermPtr lhs, TermPtr rhs, SourceLoc loc) {
    return make(Term{Term::Kind::Seq, {}, {}, {}, std::move(lhs), std::move(rhs), loc});
}
TermPtr term_par(TermPtr lhs, TermPtr rhs, SourceLoc loc) {
    return make(Term{Term::Kind::Par, {}, {}, {}, std::move(lhs), std::move(rhs), loc});
}

namespace {

std::vector<TypeId> resolve_types(const std::vector<std::string>& names, const Signature& sig,
                                  SourceLoc loc) {
    std::vector<TypeId> out;
    out.reserve(names.size());
    for (const auto& n : names) {
        TypeId t = sig.type_id(n);
        if (t < 0) throw BuildError("unknown type " + n, loc);
        out.push_back(t);
    }
    return out;
}

}  // namespace

Diagram build_from_term(const Term& term, SignaturePtr sig,
                        const std::map<std::string, Diagram>& named) {
    switch (term.kind) {
        case Term::Kind::Id:
            return identity(sig, resolve_types(term.types_a, *sig, term.loc));
        case Term::Kind::Swap:
            return swap_diagram(sig, resolve_types(term.types_a, *sig, term.loc),
                                resolve_types(term.types_b, *sig, term.loc));
        case Term::Kind::Copy:
            return copy_diagram(sig, resolve_types(term.types_a, *sig, term.loc));
        case Term::Kind::Del:
            return del_diagram(sig, resolve_types(term.types_a, *sig, term.loc));
        case Term::Kind::Name: {
            auto it = named.find(term.name);
            if (it != named.end()) return it->second;
            if (sig->box_id(term.name) >= 0) return box_diagram(sig, term.name);
            throw BuildError("unknown identifier " + term.name, term.loc);
        }
        case Term::Kind::Seq: {
            Diagram lhs = build_from_term(*term.lhs, sig, named);
            Diagram rhs = build_from_term(*term.rhs, sig, named);
            try {
                return compose(lhs, rhs);
            } catch (const Error& e) {
                throw BuildError(e.what(), term.loc);
            }
        }
        case Term::Kind::Par: {
            Diagram lhs = build_from_term(*term.lhs, sig, named);
            Diagram rhs = build_from_term(*term.rhs, sig, named);
            return tensor(lhs, rhs);
        }
    }
    throw Error("unreachable term kind");
}

namespace {

std::string typelist_text(const std::vector<std::string>& names) {
    if (names.empty()) return "I";
    std::string out;
    for (size_t i = 0; i < names.size(); ++i) {
        if (i) out += "*";
        out += names[i];
    }
    return out;
}

// Precedence: ; < * < atoms.
std::string render(const Term& t, int min_prec) {
    switch (t.kind) {
        case Term::Kind::Id:
            return "id(" + typelist_text(t.types_a) + ")";
        case Term::Kind::Swap:
            return "swap(" + typelist_text(t.types_a) + ", " + typelist_text(t.types_b) + ")";
        case Term::Kind::Copy:
            return "copy(" + typelist_text(t.types_a) + ")";
        case Term::Kind::Del:
            return "del(" + typelist_text(t.types_a) + ")";
        case Term::Kind::Name:
            return t.name;
        case Term::Kind::Seq: {
            std::string s = render(*t.lhs, 0) + " ; " + render(*t.rhs, 1);
            return min_prec > 0 ? "(" + s + ")" : s;
        }
        case Term::Kind::Par: {
            std::string s = render(*t.lhs, 1) + " * " + render(*t.rhs, 2);
            return min_prec > 1 ? "(" + s + ")" : s;
        }
    }
    return "";
}

}  // namespace

std::string term_to_text(const Term& term) { return render(term, 0); }

namespace {

// Term extraction. The diagram is replayed as alternating layers of
// generators and single boxes over a "bus" of wire occurrences: fan each
// produced wire out to its use count, bring box inputs to the front with
// adjacent swaps, apply the box, repeat, and finally permute to the right
// boundary order. Round-trip equality with the original diagram is the
// correctness contract.
class TermExtractor {
public:
    explicit TermExtractor(const Diagram& d) : d_(d), g_(d.graph()) {}

    std::string run() {
        uses_.assign(g_.wire_count(), 0);
        for (const auto& box : g_.boxes())
            for (WireId w : box.inputs) uses_[w]++;
        for (WireId w : d_.right()) uses_[w]++;

        for (WireId w : d_.left()) bus_.push_back(Slot{w, next_slot_++});
        fanout_all();

        for (BoxId b : canonical_box_order(d_)) apply_box(b);

        std::vector<int> desired;
        std::vector<char> taken(bus_.size(), 0);
        for (WireId w : d_.right()) {
            for (size_t i = 0; i < bus_.size(); ++i) {
                if (!taken[i] && bus_[i].wire == w) {
                    taken[i] = 1;
                    desired.push_back(bus_[i].id);
                    break;
                }
            }
        }
        permute_to(desired);

        if (layers_.empty()) {
            std::vector<std::string> names;
            for (WireId w : d_.left()) names.push_back(type_name(w));
            return "id(" + typelist_text(names) + ")";
        }
        std::string out;
        for (size_t i = 0; i < layers_.size(); ++i) {
            if (i) out += " ; ";
            out += layers_[i];
        }
        return out;
    }

private:
    struct Slot {
        WireId wire;
        int id;
    };

    std::string type_name(WireId w) const { return g_.sig().type_name(g_.wire_type(w)); }

    static std::string join_atoms(const std::vector<std::string>& atoms) {
        std::string out;
        for (size_t i = 0; i < atoms.size(); ++i) {
            if (i) out += " * ";
            out += atoms[i];
        }
        return out;
    }

    std::string fan_text(const std::string& type, int k) const {
        if (k == 0) return "del(" + type + ")";
        if (k == 1) return "id(" + type + ")";
        if (k == 2) return "copy(" + type + ")";
        return "(copy(" + type + ") ; (" + fan_text(type, k - 1) + " * id(" + type + ")))";
    }

    // Expands the first `count` bus slots (or all when count < 0) to their
    // remaining-use multiplicity.
    void fanout_prefix(int count) {
        int limit = count < 0 ? static_cast<int>(bus_.size()) : count;
        std::vector<std::string> atoms;
        std::vector<Slot> next_bus;
        bool nontrivial = false;
        for (size_t i = 0; i < bus_.size(); ++i) {
            if (static_cast<int>(i) < limit) {
                int k = uses_[bus_[i].wire];
                atoms.push_back(fan_text(type_name(bus_[i].wire), k));
                if (k != 1) nontrivial = true;
                for (int c = 0; c < k; ++c) next_bus.push_back(Slot{bus_[i].wire, next_slot_++});
            } else {
                atoms.push_back("id(" + type_name(bus_[i].wire) + ")");
                next_bus.push_back(bus_[i]);
            }
        }
        if (nontrivial) {
            layers_.push_back(join_atoms(atoms));
            bus_ = std::move(next_bus);
        }
    }

    void fanout_all() { fanout_prefix(-1); }

    void emit_adjacent_swap(size_t k) {
        std::vector<std::string> atoms;
        for (size_t i = 0; i < bus_.size(); ++i) {
            if (i == k) {
                atoms.push_back("swap(" + type_name(bus_[k].wire) + ", " +
                                type_name(bus_[k + 1].wire) + ")");
            } else if (i != k + 1) {
                atoms.push_back("id(" + type_name(bus_[i].wire) + ")");
            }
        }
        layers_.push_back(join_atoms(atoms));
        std::swap(bus_[k], bus_[k + 1]);
    }

    void permute_to(const std::vector<int>& desired) {
        for (size_t i = 0; i < desired.size(); ++i) {
            if (bus_[i].id == desired[i]) continue;
            size_t j = i + 1;
            while (j < bus_.size() && bus_[j].id != desired[i]) ++j;
            for (size_t k = j; k > i; --k) emit_adjacent_swap(k - 1);
        }
    }

    void apply_box(BoxId b) {
        const Box& box = g_.box(b);
        std::vector<char> picked(bus_.size(), 0);
        std::vector<int> front;
        for (WireId w : box.inputs) {
            for (size_t i = 0; i < bus_.size(); ++i) {
                if (!picked[i] && bus_[i].wire == w) {
                    picked[i] = 1;
                    front.push_back(bus_[i].id);
                    break;
                }
            }
        }
        std::vector<int> desired = front;
        for (size_t i = 0; i < bus_.size(); ++i)
            if (!picked[i]) desired.push_back(bus_[i].id);
        permute_to(desired);

        std::vector<std::string> atoms;
        atoms.push_back(g_.sig().box_name(box.label));
        for (size_t i = box.inputs.size(); i < bus_.size(); ++i)
            atoms.push_back("id(" + type_name(bus_[i].wire) + ")");
        layers_.push_back(join_atoms(atoms));

        std::vector<Slot> next_bus;
        for (WireId w : box.outputs) next_bus.push_back(Slot{w, next_slot_++});
        for (size_t i = box.inputs.size(); i < bus_.size(); ++i) next_bus.push_back(bus_[i]);
        bus_ = std::move(next_bus);
        fanout_prefix(static_cast<int>(box.outputs.size()));
    }

    const Diagram& d_;
    const Hypergraph& g_;
    std::vector<int> uses_;
    std::vector<Slot> bus_;
    std::vector<std::string> layers_;
    int next_slot_ = 0;
};

}  // namespace

std::string diagram_to_term_text(const Diagram& d) { return TermExtractor(d).run(); }

}  // namespace markov
