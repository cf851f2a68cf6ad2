#include <doctest.h>

#include <random>

#include "markov/contraction.hpp"
#include "markov/generators.hpp"
#include "markov/interp.hpp"

using namespace markov;

namespace {

SignaturePtr fig_sig() {
    return std::make_shared<Signature>(
        std::vector<std::string>{"X", "Y", "W"},
        std::vector<BoxDecl>{{"f", {"W"}, {"Y"}}, {"g", {"X"}, {"W"}}});
}

// Reachability oracle by repeated squaring of the wire adjacency matrix:
// an independent path-existence computation.
bool oracle_nonsignalling(const TracePartition& t) {
    const auto& g = t.diagram().graph();
    int n = g.wire_count();
    std::vector<char> adj(n * n, 0);
    for (int w = 0; w < n; ++w) adj[w * n + w] = 1;  // zero-length paths count
    for (const auto& box : g.boxes())
        for (WireId a : box.inputs)
            for (WireId b : box.outputs) adj[a * n + b] = 1;
    for (bool changed = true; changed;) {
        changed = false;
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                if (!adj[i * n + k]) continue;
                for (int j = 0; j < n; ++j)
                    if (adj[k * n + j] && !adj[i * n + j]) {
                        adj[i * n + j] = 1;
                        changed = true;
                    }
            }
    }
    for (int a = 0; a < t.feedback(); ++a)
        for (int b = 0; b < t.feedback(); ++b)
            if (adj[t.w_in(a) * n + t.w_out(b)]) return false;
    return true;
}

}  // namespace

TEST_CASE("the identity on w is signalling (zero-length path)") {
    auto sig = fig_sig();
    TracePartition t(identity(sig, {2}), 1);
    CHECK_FALSE(is_nonsignalling(t));
    CHECK_THROWS_AS(contract(t), SignallingError);
}

TEST_CASE("the symmetry is traceable") {
    auto sig = fig_sig();
    TracePartition t(swap_diagram(sig, {2}, {2}), 1);
    CHECK(is_nonsignalling(t));
    CHECK(equal(contract(t), identity(sig, {2})));
}

TEST_CASE("structural non-signalling matches the path-enumeration oracle") {
    std::mt19937_64 rng(321);
    int nonsig = 0, sig_count = 0;
    for (int i = 0; i < 120; ++i) {
        SignaturePtr s = i % 2 ? random_signature(rng) : law_signature();
        DiagramOptions opts;
        Diagram d = random_diagram(rng, s, opts);
        int fb = std::min({static_cast<int>(d.left().size()),
                           static_cast<int>(d.right().size()), 1 + static_cast<int>(rng() % 2)});
        // Only feed back positions whose types agree.
        int usable = 0;
        auto lt = d.left_types();
        auto rt = d.right_types();
        for (int k = 1; k <= fb; ++k) {
            if (lt[lt.size() - k] == rt[rt.size() - k])
                usable = k;
            else
                break;
        }
        if (usable == 0) continue;
        TracePartition t(d, usable);
        bool fast = is_nonsignalling(t);
        CHECK(fast == oracle_nonsignalling(t));
        (fast ? nonsig : sig_count)++;
    }
    CHECK(nonsig > 0);
    CHECK(sig_count > 0);
}

TEST_CASE("contracting over an empty feedback segment changes nothing") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 10; ++i) {
        Diagram d = random_diagram(rng, law_signature());
        TracePartition t(d, 0);
        CHECK(is_nonsignalling(t));
        CHECK(equal(contract(t), d));
    }
}

TEST_CASE("feedback of one box into another contracts to a two-box chain") {
    auto sig = fig_sig();
    // d = swap(X, W) ; (f * g) : X (x) W -> Y (x) W, with f : W -> Y and
    // g : X -> W. Feeding the W output back into the W input leaves the
    // chain g ; f with one inner wire.
    Diagram d = compose(swap_diagram(sig, {0}, {2}),
                        tensor(box_diagram(sig, "f"), box_diagram(sig, "g")));
    TracePartition t(d, 1);
    CHECK(is_nonsignalling(t));
    Diagram c = contract(t);
    CHECK(c.graph().box_count() == 2);
    CHECK(c.graph().wire_count() == 3);  // X in, inner W, Y out
    CHECK(equal(c, compose(box_diagram(sig, "g"), box_diagram(sig, "f"))));
}

TEST_CASE("contraction preserves all diagram invariants") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 50; ++i) {
        auto t = random_trace_partition(rng, law_signature(), 1 + i % 2);
        REQUIRE(t.has_value());
        Diagram c = contract(*t);
        CHECK_FALSE(Diagram::find_violation(c.cospan()).has_value());
        CHECK(c.left().size() == t->diagram().left().size() - t->feedback());
        CHECK(c.right().size() == t->diagram().right().size() - t->feedback());
    }
}

TEST_CASE("trace partitions validate their boundary split") {
    auto sig = fig_sig();
    CHECK_THROWS_AS(TracePartition(box_diagram(sig, "f"), 2), Error);
    // f : W -> Y has mismatched trailing types at feedback 1.
    CHECK_THROWS_AS(TracePartition(box_diagram(sig, "f"), 1), Error);
}

TEST_CASE("contraction identity check: syntactic equality gives Holds") {
    std::mt19937_64 rng(19);
    auto sig = law_signature();
    auto t = random_trace_partition(rng, sig, 1);
    REQUIRE(t.has_value());
    Model m = random_model(rng, sig, 3);
    auto res = check_contraction_identity(*t, *t, m);
    CHECK(res.verdict == ContractionVerdict::Holds);
    CHECK(res.conclusion_residual <= 1e-9);
}

TEST_CASE("contraction identity check: unequal premises are Vacuous") {
    auto sig = std::make_shared<Signature>(
        std::vector<std::string>{"X", "Y", "W"},
        std::vector<BoxDecl>{{"f", {"W"}, {"Y"}}, {"f2", {"W"}, {"Y"}}, {"g", {"X"}, {"W"}}});
    Diagram d1 = compose(swap_diagram(sig, {0}, {2}),
                         tensor(box_diagram(sig, "f"), box_diagram(sig, "g")));
    Diagram d2 = compose(swap_diagram(sig, {0}, {2}),
                         tensor(box_diagram(sig, "f2"), box_diagram(sig, "g")));
    std::mt19937_64 rng(23);
    std::vector<int> cards = {2, 3, 2};
    Factors fx = {FinSet("X", 2)}, fy = {FinSet("Y", 3)}, fw = {FinSet("W", 2)};
    Kernel kf = random_kernel(rng, fw, fy);
    Kernel kf2 = random_kernel(rng, fw, fy);
    Kernel kg = random_kernel(rng, fx, fw);
    Model unequal(sig, cards, {kf, kf2, kg});
    auto res = check_contraction_identity(TracePartition(d1, 1), TracePartition(d2, 1), unequal);
    CHECK(res.verdict == ContractionVerdict::Vacuous);

    Model agreeing(sig, cards, {kf, kf, kg});
    auto res2 = check_contraction_identity(TracePartition(d1, 1), TracePartition(d2, 1), agreeing);
    CHECK(res2.verdict == ContractionVerdict::Holds);
}

TEST_CASE("contraction identity holds on premise-equal pairs built from a shared part") {
    // c1 uses box h, c2 uses g then a copy of the same kernel: the model
    // assigns h := g so the premises agree exactly, and the contractions
    // must then agree too.
    auto sig = std::make_shared<Signature>(
        std::vector<std::string>{"A", "B", "XT"},
        std::vector<BoxDecl>{{"f", {"XT"}, {"B"}}, {"g", {"A"}, {"XT"}}, {"h", {"A"}, {"XT"}}});
    Diagram c1 = compose(swap_diagram(sig, {0}, {2}),
                         tensor(box_diagram(sig, "f"), box_diagram(sig, "g")));
    Diagram c2 = compose(swap_diagram(sig, {0}, {2}),
                         tensor(box_diagram(sig, "f"), box_diagram(sig, "h")));
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> cards = {1 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 3),
                                  1 + static_cast<int>(rng() % 3)};
        Factors fa = {FinSet("A", cards[0])};
        Factors fb = {FinSet("B", cards[1])};
        Factors fx = {FinSet("XT", cards[2])};
        Kernel kf = random_kernel(rng, fx, fb);
        Kernel kg = random_kernel(rng, fa, fx);
        Model m(sig, cards, {kf, kg, kg});
        auto res = check_contraction_identity(TracePartition(c1, 1), TracePartition(c2, 1), m);
        CHECK(res.verdict == ContractionVerdict::Holds);
    }
}
