#include <doctest.h>

#include <random>

#include "markov/generators.hpp"
#include "markov/interp.hpp"

using namespace markov;

namespace {

SignaturePtr small_sig() {
    return std::make_shared<Signature>(
        std::vector<std::string>{"X", "Y"},
        std::vector<BoxDecl>{{"f", {"X"}, {"Y"}}, {"g", {"Y"}, {"X"}}});
}

Model small_model(std::mt19937_64& rng, SignaturePtr sig, int cx, int cy) {
    Factors fx = {FinSet("X", cx)}, fy = {FinSet("Y", cy)};
    return Model(sig, {cx, cy}, {random_kernel(rng, fx, fy), random_kernel(rng, fy, fx)});
}

}  // namespace

TEST_CASE("model construction validates totality and arities") {
    auto sig = small_sig();
    std::mt19937_64 rng(3);
    Factors fx = {FinSet("X", 2)}, fy = {FinSet("Y", 3)};
    CHECK_THROWS_AS(Model(sig, {2}, {}), Error);
    CHECK_THROWS_AS(Model(sig, {2, 3}, {random_kernel(rng, fx, fy)}), Error);
    CHECK_THROWS_AS(Model(sig, {2, 0},
                          {random_kernel(rng, fx, fy), random_kernel(rng, fy, fx)}),
                    Error);
    // Arity flip: g's kernel must be Y -> X.
    CHECK_THROWS_AS(Model(sig, {2, 3},
                          {random_kernel(rng, fx, fy), random_kernel(rng, fx, fy)}),
                    Error);
    CHECK_NOTHROW(small_model(rng, sig, 2, 3));
}

TEST_CASE("interpretation of structural diagrams") {
    auto sig = small_sig();
    std::mt19937_64 rng(5);
    Model m = small_model(rng, sig, 2, 3);
    CHECK(max_abs_diff(interpret(identity(sig, {0}), m), identity_kernel(m.factors({0}))) == 0.0);
    CHECK(max_abs_diff(interpret(copy_diagram(sig, {0, 1}), m),
                       copy_kernel(m.factors({0, 1}))) == 0.0);
    CHECK(max_abs_diff(interpret(del_diagram(sig, {1}), m), del_kernel(m.factors({1}))) == 0.0);
    CHECK(max_abs_diff(interpret(swap_diagram(sig, {0}, {1}), m),
                       swap_kernel(m.factors({0}), m.factors({1}))) == 0.0);
    CHECK(max_abs_diff(interpret(box_diagram(sig, "f"), m), m.box_kernel(0)) == 0.0);
    Kernel scalar = interpret(empty_diagram(sig), m);
    CHECK(scalar.dom_size() == 1);
    CHECK(scalar.cod_size() == 1);
    CHECK(scalar.at(0, 0) == 1.0);
}

TEST_CASE("copy-then-delete interprets as the identity") {
    auto sig = small_sig();
    std::mt19937_64 rng(7);
    Model m = small_model(rng, sig, 3, 2);
    Diagram d = compose(copy_diagram(sig, {0}),
                        tensor(del_diagram(sig, {0}), identity(sig, {0})));
    CHECK(max_abs_diff(interpret(d, m), identity_kernel(m.factors({0}))) <= 1e-12);
}

TEST_CASE("interpretation is functorial for composition and tensor") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 25; ++i) {
        SignaturePtr sig = i % 2 ? random_signature(rng) : law_signature();
        Model m = random_model(rng, sig, 3);
        Diagram f = random_diagram(rng, sig);
        DiagramOptions opts;
        opts.left_types = f.right_types();
        Diagram g = random_diagram(rng, sig, opts);
        CHECK(max_abs_diff(interpret(compose(f, g), m),
                           compose(interpret(g, m), interpret(f, m))) <= 1e-9);
        Diagram h = random_diagram(rng, sig);
        CHECK(max_abs_diff(interpret(tensor(f, h), m),
                           tensor(interpret(f, m), interpret(h, m))) <= 1e-9);
    }
}

TEST_CASE("interpretation handles fan-out and dangling wires") {
    auto sig = small_sig();
    std::mt19937_64 rng(13);
    Model m = small_model(rng, sig, 2, 2);
    // copy ; (f (x) f): both branches share the input wire.
    Diagram d = compose(copy_diagram(sig, {0}),
                        tensor(box_diagram(sig, "f"), box_diagram(sig, "f")));
    Kernel got = interpret(d, m);
    const Kernel& kf = m.box_kernel(0);
    for (int x = 0; x < 2; ++x)
        for (int y1 = 0; y1 < 2; ++y1)
            for (int y2 = 0; y2 < 2; ++y2)
                CHECK(got.at(x, y1 * 2 + y2) ==
                      doctest::Approx(kf.at(x, y1) * kf.at(x, y2)).epsilon(1e-12));
    // f with its output discarded at the boundary (dangling after copy).
    Diagram keep_one = compose(copy_diagram(sig, {0}),
                               tensor(identity(sig, {0}), box_diagram(sig, "f")));
    Diagram drop = compose(keep_one, tensor(identity(sig, {0}), del_diagram(sig, {1})));
    CHECK(max_abs_diff(interpret(drop, m), identity_kernel(m.factors({0}))) <= 1e-12);
}

TEST_CASE("trace soundness on the symmetry and on empty feedback") {
    auto sig = small_sig();
    std::mt19937_64 rng(17);
    Model m = small_model(rng, sig, 3, 2);
    auto res = check_trace_soundness(TracePartition(swap_diagram(sig, {0}, {0}), 1), m);
    CHECK(res.holds);
    CHECK(max_abs_diff(res.contracted, identity_kernel(m.factors({0}))) == 0.0);
    CHECK(max_abs_diff(res.traced, identity_kernel(m.factors({0}))) == 0.0);

    Diagram f = random_diagram(rng, sig);
    auto res0 = check_trace_soundness(TracePartition(f, 0), m);
    CHECK(res0.holds);
    CHECK(max_abs_diff(res0.contracted, interpret(f, m)) == 0.0);
}

TEST_CASE("trace soundness across random partitions and models") {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 40; ++i) {
        SignaturePtr sig = law_signature();
        auto t = random_trace_partition(rng, sig, 1 + i % 2);
        REQUIRE(t.has_value());
        Model m = random_model(rng, sig, 3);
        auto res = check_trace_soundness(*t, m);
        CHECK(res.holds);
        CHECK(res.residual <= 1e-9);
    }
}

TEST_CASE("structurally signalling partitions are rejected") {
    auto sig = small_sig();
    std::mt19937_64 rng(23);
    Model m = small_model(rng, sig, 2, 2);
    TracePartition t(identity(sig, {0}), 1);
    CHECK_THROWS_AS(check_trace_soundness(t, m), SignallingError);
}
