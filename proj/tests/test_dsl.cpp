#include <doctest.h>

#include <random>

#include "markov/dot.hpp"
#include "markov/dsl.hpp"
#include "markov/generators.hpp"
#include "markov/term.hpp"

using namespace markov;

namespace {

// Type-directed random terms: every generated term is well-typed by
// construction, which makes print/reparse/rebuild a total round trip.
struct GenTerm {
    TermPtr term;
    std::vector<TypeId> right;
};

GenTerm gen_term(std::mt19937_64& rng, const Signature& sig, std::vector<TypeId> left, int depth) {
    auto names = [&](const std::vector<TypeId>& ts) {
        std::vector<std::string> out;
        for (TypeId t : ts) out.push_back(sig.type_name(t));
        return out;
    };
    if (depth <= 0) return {term_id(names(left)), left};
    switch (rand_int(rng, 0, 5)) {
        case 0: {  // sequential composite
            GenTerm a = gen_term(rng, sig, left, depth - 1);
            GenTerm b = gen_term(rng, sig, a.right, depth - 1);
            return {term_seq(a.term, b.term), b.right};
        }
        case 1: {  // parallel split
            int cut = left.empty() ? 0 : rand_int(rng, 0, static_cast<int>(left.size()));
            std::vector<TypeId> l1(left.begin(), left.begin() + cut);
            std::vector<TypeId> l2(left.begin() + cut, left.end());
            GenTerm a = gen_term(rng, sig, l1, depth - 1);
            GenTerm b = gen_term(rng, sig, l2, depth - 1);
            std::vector<TypeId> right = a.right;
            right.insert(right.end(), b.right.begin(), b.right.end());
            return {term_par(a.term, b.term), right};
        }
        case 2: {  // comonoid structure on a single wire
            if (left.size() == 1) {
                if (rand_int(rng, 0, 1) == 0)
                    return {term_copy(names(left)), {left[0], left[0]}};
                return {term_del(names(left)), {}};
            }
            return gen_term(rng, sig, left, depth - 1);
        }
        case 3: {  // a box whose inputs match exactly
            std::vector<int> fits;
            for (int b = 0; b < sig.box_count(); ++b)
                if (sig.box_inputs(b) == left) fits.push_back(b);
            if (fits.empty()) return gen_term(rng, sig, left, depth - 1);
            int b = fits[rand_int(rng, 0, static_cast<int>(fits.size()) - 1)];
            return {term_name(sig.box_name(b)), sig.box_outputs(b)};
        }
        case 4: {  // block swap
            if (left.size() < 2) return gen_term(rng, sig, left, depth - 1);
            int cut = rand_int(rng, 1, static_cast<int>(left.size()) - 1);
            std::vector<TypeId> a(left.begin(), left.begin() + cut);
            std::vector<TypeId> b(left.begin() + cut, left.end());
            std::vector<TypeId> right = b;
            right.insert(right.end(), a.begin(), a.end());
            return {term_swap(names(a), names(b)), right};
        }
        default:
            return {term_id(names(left)), left};
    }
}

}  // namespace

TEST_CASE("parsing the basic example builds a two-box chain") {
    auto prog = parse_program("type X; box f : X -> X; diag d = f ; f");
    REQUIRE(prog.sig);
    const Diagram& d = prog.diagram("d");
    CHECK(d.graph().box_count() == 2);
    CHECK(equal(d, compose(box_diagram(prog.sig, "f"), box_diagram(prog.sig, "f"))));
}

TEST_CASE("multiple declarations, comments, and statement boundaries") {
    auto prog = parse_program(
        "# a signature with two diagrams\n"
        "type X;\n"
        "type Y;\n"
        "box f : X -> Y;\n"
        "box m : X*Y -> I;\n"
        "diag d = copy(X) ; (id(X) * f);\n"
        "diag e = d ; m;\n");
    CHECK(prog.order == std::vector<std::string>{"d", "e"});
    CHECK(prog.diagram("d").right_types() == std::vector<TypeId>{0, 1});
    CHECK(prog.diagram("e").right_types().empty());
    // A box into the unit is the discard map, so the whole of `e`
    // normalizes away.
    CHECK(prog.diagram("e").graph().box_count() == 0);
    CHECK(equal(prog.diagram("e"), del_diagram(prog.sig, {0})));
}

TEST_CASE("unknown identifiers and syntax errors carry locations") {
    try {
        parse_program("type X;\ndiag d = nosuch;\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.col == 10);
    }
    try {
        parse_program("type X;\nbox f : X -> ;\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
    CHECK_THROWS_AS(parse_program("diag d = id(X); type X;"), ParseError);
}

TEST_CASE("type errors in terms are reported with locations") {
    try {
        parse_program("type X; type Y; box f : X -> Y;\ndiag d = f ; f;");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("underscore sugar resolves against declared types") {
    auto prog = parse_program(
        "type X; type Y; box f : X -> X;\n"
        "diag a = id_X;\n"
        "diag b = copy_X ; (f * id_X);\n"
        "diag c = swap_X_Y;\n"
        "diag d = del_Y;\n");
    CHECK(equal(prog.diagram("a"), identity(prog.sig, {0})));
    CHECK(equal(prog.diagram("c"), swap_diagram(prog.sig, {0}, {1})));
    CHECK(equal(prog.diagram("d"), del_diagram(prog.sig, {1})));
    CHECK(prog.diagram("b").graph().box_count() == 1);
}

TEST_CASE("random term round-trip: build, print, reparse, rebuild") {
    std::mt19937_64 rng(101);
    auto sig = law_signature();
    std::string sig_text = signature_to_text(*sig);
    for (int i = 0; i < 60; ++i) {
        std::vector<TypeId> left;
        int m = rand_int(rng, 0, 3);
        for (int k = 0; k < m; ++k) left.push_back(rand_int(rng, 0, sig->type_count() - 1));
        GenTerm g = gen_term(rng, *sig, left, 3);
        Diagram direct = build_from_term(*g.term, sig);
        std::string text = sig_text + "diag d = " + term_to_text(*g.term) + ";\n";
        auto prog = parse_program(text);
        CHECK(equal(direct, prog.diagram("d")));
    }
}

TEST_CASE("diagram extraction round-trips through the concrete syntax") {
    std::mt19937_64 rng(103);
    for (int i = 0; i < 60; ++i) {
        SignaturePtr sig = i % 3 ? law_signature() : random_signature(rng);
        Diagram d = random_diagram(rng, sig);
        std::string text = signature_to_text(*sig) + "diag d = " + diagram_to_term_text(d) + ";\n";
        CAPTURE(text);
        auto prog = parse_program(text);
        CHECK(equal(d, prog.diagram("d")));
    }
}

TEST_CASE("extraction handles boundary-only diagrams") {
    auto sig = law_signature();
    CHECK(diagram_to_term_text(empty_diagram(sig)) == "id(I)");
    CHECK(diagram_to_term_text(identity(sig, {0})) == "id(X)");
    Diagram sw = swap_diagram(sig, {0}, {1});
    auto prog = parse_program(signature_to_text(*sig) + "diag d = " + diagram_to_term_text(sw) + ";");
    CHECK(equal(sw, prog.diagram("d")));
}

TEST_CASE("DOT output is deterministic and well-formed") {
    auto prog = parse_program(
        "type X; type Y; box f : X -> Y; box g : Y -> X;\n"
        "diag d = copy(X) ; (f * id(X)) ; (g * del(X));\n");
    const Diagram& d = prog.diagram("d");
    std::string once = to_dot(d, "d");
    std::string twice = to_dot(d, "d");
    CHECK(once == twice);
    CHECK(once.find("digraph \"d\"") != std::string::npos);
    CHECK(once.find("rankdir=LR") != std::string::npos);
    CHECK(once.find("shape=box") != std::string::npos);
    CHECK(once.find("in0 ->") != std::string::npos);
    // Isomorphic representatives render identically node-for-node.
    std::mt19937_64 rng(107);
    std::string permuted = to_dot(permuted_copy(d, rng), "d");
    CHECK(once == permuted);
}
