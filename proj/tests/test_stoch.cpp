#include <doctest.h>

#include <cmath>
#include <random>

#include "markov/generators.hpp"
#include "markov/stoch.hpp"

using namespace markov;

namespace {

Factors fs(const char* name, int card) { return {FinSet(name, card)}; }

Kernel point_mass(Factors cod, std::int64_t at) {
    std::vector<double> e(total_card(cod), 0.0);
    e[at] = 1.0;
    return Kernel({}, std::move(cod), std::move(e));
}

}  // namespace

TEST_CASE("finite sets must be nonempty") {
    CHECK_THROWS_AS(FinSet("X", 0), Error);
    CHECK(FinSet("X", 1).card == 1);
}

TEST_CASE("kernels validate row sums and nonnegativity") {
    CHECK_THROWS_AS(Kernel(fs("X", 2), fs("Y", 2), {0.5, 0.4, 1.0, 0.0}), Error);
    CHECK_THROWS_AS(Kernel(fs("X", 1), fs("Y", 2), {1.5, -0.5}), Error);
    CHECK_NOTHROW(Kernel(fs("X", 2), fs("Y", 2), {0.5, 0.5, 1.0, 0.0}));
}

TEST_CASE("composition matches the triple-loop oracle on 2x2x2") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        Kernel f = random_kernel(rng, fs("X", 2), fs("Y", 2));
        Kernel g = random_kernel(rng, fs("Y", 2), fs("Z", 2));
        Kernel gf = compose(g, f);
        for (int x = 0; x < 2; ++x)
            for (int z = 0; z < 2; ++z) {
                double acc = 0.0;
                for (int y = 0; y < 2; ++y) acc += g.at(y, z) * f.at(x, y);
                CHECK(gf.at(x, z) == doctest::Approx(acc).epsilon(1e-12));
            }
    }
}

TEST_CASE("identity is a unit and deletion absorbs everything") {
    std::mt19937_64 rng(5);
    Kernel f = random_kernel(rng, fs("X", 3), fs("Y", 4));
    CHECK(max_abs_diff(compose(identity_kernel(f.cod()), f), f) == 0.0);
    CHECK(max_abs_diff(compose(f, identity_kernel(f.dom())), f) == 0.0);
    Kernel discarded = compose(del_kernel(f.cod()), f);
    CHECK(max_abs_diff(discarded, del_kernel(f.dom())) <= 1e-12);
}

TEST_CASE("tensor matches the quadruple-loop oracle") {
    std::mt19937_64 rng(7);
    Kernel f = random_kernel(rng, fs("A", 2), fs("B", 3));
    Kernel g = random_kernel(rng, fs("C", 2), fs("D", 2));
    Kernel fg = tensor(f, g);
    for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c)
            for (int b = 0; b < 3; ++b)
                for (int d = 0; d < 2; ++d)
                    CHECK(fg.at(a * 2 + c, b * 2 + d) ==
                          doctest::Approx(f.at(a, b) * g.at(c, d)).epsilon(1e-12));
}

TEST_CASE("support of point masses and uniform states") {
    CHECK(support(point_mass(fs("X", 3), 0)) == std::vector<std::int64_t>{0});
    CHECK(support(uniform_kernel({}, fs("X", 3))) == std::vector<std::int64_t>{0, 1, 2});
    Kernel sparse(fs("A", 2), fs("X", 3), {0.5, 0.0, 0.5, 0.5, 0.0, 0.5});
    CHECK(support(sparse) == std::vector<std::int64_t>{0, 2});
}

TEST_CASE("almost-sure equality ignores off-support columns") {
    Kernel delta0 = point_mass(fs("X", 2), 0);
    // f1, f2 : X -> Y differing only on column x=1.
    Kernel f1(fs("X", 2), fs("Y", 2), {0.3, 0.7, 0.1, 0.9});
    Kernel f2(fs("X", 2), fs("Y", 2), {0.3, 0.7, 0.8, 0.2});
    CHECK(as_equal(f1, f2, delta0));
    Kernel full = uniform_kernel({}, fs("X", 2));
    CHECK_FALSE(as_equal(f1, f2, full));
    // With a full-support prior, almost-sure equality forces true equality.
    CHECK(as_equal(f1, f1, full));
}

TEST_CASE("absolute continuity is support inclusion") {
    Kernel delta0 = point_mass(fs("X", 2), 0);
    Kernel uni = uniform_kernel({}, fs("X", 2));
    CHECK(abs_cont(delta0, uni));
    CHECK_FALSE(abs_cont(uni, delta0));
    CHECK(abs_cont(uni, uni));
}

TEST_CASE("every finite kernel is atomic") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        Factors a = random_factors(rng, 0, 2, 1, 4, "A");
        Factors x = random_factors(rng, 1, 2, 1, 4, "X");
        CHECK(is_atomic(random_kernel(rng, a, x)));
        CHECK(is_atomic(random_sparse_kernel(rng, a, x)));
        CHECK(is_atomic(random_deterministic_kernel(rng, a, x)));
    }
}

TEST_CASE("determinism agrees with copy-commutation on all 0/1 matrices 2->2") {
    // Enumerate all 16 two-by-two 0/1 matrices; exactly the row-stochastic
    // ones are kernels, and each must commute with copying.
    Factors two = fs("X", 2);
    int kernels_seen = 0;
    for (int mask = 0; mask < 16; ++mask) {
        std::vector<double> e = {double(mask & 1), double((mask >> 1) & 1),
                                 double((mask >> 2) & 1), double((mask >> 3) & 1)};
        if (e[0] + e[1] != 1.0 || e[2] + e[3] != 1.0) continue;
        kernels_seen++;
        Kernel f(two, two, e);
        CHECK(is_deterministic(f));
        Kernel lhs = compose(copy_kernel(two), f);           // copy after f
        Kernel rhs = compose(tensor(f, f), copy_kernel(two));  // (f (x) f) after copy
        CHECK(max_abs_diff(lhs, rhs) == 0.0);
    }
    CHECK(kernels_seen == 4);
    // A genuinely random kernel is neither 0/1 nor copy-commuting.
    Kernel blur(two, two, {0.5, 0.5, 0.25, 0.75});
    CHECK_FALSE(is_deterministic(blur));
    Kernel lhs = compose(copy_kernel(two), blur);
    Kernel rhs = compose(tensor(blur, blur), copy_kernel(two));
    CHECK(max_abs_diff(lhs, rhs) > 0.1);
}

TEST_CASE("conditional of a product is the second factor") {
    std::mt19937_64 rng(13);
    Kernel p = random_kernel(rng, fs("A", 2), fs("X", 3));
    Kernel q = random_kernel(rng, fs("A", 2), fs("Y", 2));
    // f(x,y|a) = p(x|a) q(y|a) — conditioning on x returns q, independent of x.
    std::vector<double> joint(2 * 6);
    for (int a = 0; a < 2; ++a)
        for (int x = 0; x < 3; ++x)
            for (int y = 0; y < 2; ++y) joint[a * 6 + x * 2 + y] = p.at(a, x) * q.at(a, y);
    Kernel f(fs("A", 2), concat_factors(fs("X", 3), fs("Y", 2)), joint);
    Kernel cond = conditional(f, 1);
    for (int a = 0; a < 2; ++a)
        for (int x = 0; x < 3; ++x)
            for (int y = 0; y < 2; ++y)
                CHECK(cond.at(x * 2 + a, y) == doctest::Approx(q.at(a, y)).epsilon(1e-9));
}

TEST_CASE("conditional of a copied state is a point mass on the support") {
    Kernel p({}, fs("X", 3), {0.5, 0.5, 0.0});
    Kernel f = compose(copy_kernel(fs("X", 3)), p);  // I -> X (x) X
    Kernel cond = conditional(f, 1);
    for (int x = 0; x < 2; ++x)  // support of p
        for (int x2 = 0; x2 < 3; ++x2)
            CHECK(cond.at(x, x2) == doctest::Approx(x == x2 ? 1.0 : 0.0));
    // Null column convention: uniform.
    CHECK(cond.at(2, 0) == doctest::Approx(1.0 / 3));
}

TEST_CASE("conditional recomposition on random kernels") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 30; ++i) {
        Factors a = random_factors(rng, 0, 1, 1, 3, "A");
        Factors x = random_factors(rng, 1, 1, 2, 3, "X");
        Factors y = random_factors(rng, 1, 1, 2, 3, "Y");
        Kernel f = i % 2 ? random_sparse_kernel(rng, a, concat_factors(x, y))
                         : random_kernel(rng, a, concat_factors(x, y));
        Kernel cond = conditional(f, 1);
        Kernel xm = marginal(f, {0});
        std::int64_t as = f.dom_size(), xs = total_card(x), ys = total_card(y);
        for (std::int64_t av = 0; av < as; ++av)
            for (std::int64_t xv = 0; xv < xs; ++xv)
                for (std::int64_t yv = 0; yv < ys; ++yv)
                    CHECK(std::abs(f.at(av, xv * ys + yv) -
                                   xm.at(av, xv) * cond.at(xv * as + av, yv)) <= 1e-9);
    }
}

TEST_CASE("Bayesian inverse of a deterministic bijection is its inverse") {
    Factors three = fs("X", 3);
    // A cyclic permutation as a kernel.
    std::vector<double> perm(9, 0.0);
    for (int x = 0; x < 3; ++x) perm[x * 3 + (x + 1) % 3] = 1.0;
    Kernel f(three, fs("Y", 3), perm);
    Kernel prior = uniform_kernel({}, three);
    Kernel inv = bayes_inverse(f, prior);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x)
            CHECK(inv.at(y, x) == doctest::Approx((x + 1) % 3 == y ? 1.0 : 0.0));
}

TEST_CASE("Bayesian inverse against an uninformative likelihood returns the prior") {
    std::mt19937_64 rng(19);
    Kernel prior = random_kernel(rng, fs("A", 2), fs("X", 3));
    // f(y|x) independent of x.
    Kernel row = random_kernel(rng, Factors{}, fs("Y", 2));
    std::vector<double> flat(3 * 2);
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 2; ++y) flat[x * 2 + y] = row.at(0, y);
    Kernel f(fs("X", 3), fs("Y", 2), flat);
    Kernel inv = bayes_inverse(f, prior);
    for (int a = 0; a < 2; ++a)
        for (int y = 0; y < 2; ++y)
            for (int x = 0; x < 3; ++x)
                CHECK(inv.at(a * 2 + y, x) == doctest::Approx(prior.at(a, x)).epsilon(1e-9));
}

TEST_CASE("non-signalling detection: product kernels are non-signalling") {
    std::mt19937_64 rng(23);
    Kernel g = random_kernel(rng, fs("X", 2), fs("Y", 3));
    Kernel h = random_kernel(rng, fs("Wp", 2), fs("W", 2));
    // But make h constant so the W output ignores the W' input.
    std::vector<double> const_rows = {0.3, 0.7, 0.3, 0.7};
    Kernel hc(fs("Wp", 2), fs("W", 2), const_rows);
    auto f_s = is_nonsignalling_sem(tensor(g, hc), 1, 1);
    REQUIRE(f_s.has_value());
    CHECK(f_s->dom_size() == 2);
    CHECK(f_s->at(0, 0) == doctest::Approx(0.3));
}

TEST_CASE("non-signalling detection: the identity is signalling") {
    Factors w = fs("W", 2);
    Kernel id2 = identity_kernel(concat_factors(w, w));
    CHECK_FALSE(is_nonsignalling_sem(id2, 1, 1).has_value());
    CHECK_THROWS_AS(causal_trace(identity_kernel(w), 1), SignallingError);
}

TEST_CASE("construct-then-detect recovers the feedback marginal") {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 30; ++i) {
        Factors x = random_factors(rng, 0, 2, 1, 3, "X");
        Factors w_in = random_factors(rng, 1, 1, 1, 3, "V");
        Factors y = random_factors(rng, 0, 2, 1, 3, "Y");
        Factors w_out = random_factors(rng, 1, 1, 1, 3, "W");
        NsKernel ns = random_nonsignalling(rng, x, w_in, y, w_out, i % 3 == 0);
        auto detected = is_nonsignalling_sem(ns.f, 1, 1);
        REQUIRE(detected.has_value());
        CHECK(max_abs_diff(*detected, ns.w_marginal) <= 1e-9);
    }
}

TEST_CASE("disintegration with a deterministic marginal slices the kernel") {
    std::mt19937_64 rng(31);
    Factors x = fs("X", 2), w = fs("W", 2), y = fs("Y", 3);
    // w = x deterministically.
    Kernel f_s(x, w, {1.0, 0.0, 0.0, 1.0});
    Kernel fp = random_kernel(rng, concat_factors(w, concat_factors(x, w)), y);
    Kernel f = recompose(f_s, fp);
    auto dis = disintegrate(f, f_s, 1, 1);
    // On selected cells the remainder reproduces the Y-slice of f.
    for (int xv = 0; xv < 2; ++xv)
        for (int wi = 0; wi < 2; ++wi)
            for (int yv = 0; yv < 3; ++yv) {
                int wv = xv;  // the deterministic choice
                double slice = f.at(xv * 2 + wi, yv * 2 + wv);
                CHECK(dis.remainder.at((wv * 2 + xv) * 2 + wi, yv) ==
                      doctest::Approx(slice).epsilon(1e-9));
            }
    // Null cells carry the uniform convention.
    CHECK(dis.remainder.at((1 * 2 + 0) * 2 + 0, 0) == doctest::Approx(1.0 / 3));
    CHECK(max_abs_diff(recompose(dis.w_marginal, dis.remainder), f) <= 1e-9);
}

TEST_CASE("causal trace of the swap is the identity, exactly") {
    for (int n = 1; n <= 6; ++n) {
        Factors w = {FinSet("W", n)};
        Kernel traced = causal_trace(swap_kernel(w, w), 1);
        Kernel id = identity_kernel(w);
        for (std::int64_t i = 0; i < traced.dom_size(); ++i)
            for (std::int64_t j = 0; j < traced.cod_size(); ++j)
                CHECK(traced.at(i, j) == id.at(i, j));
    }
}

TEST_CASE("causal trace over a singleton feedback object is the kernel itself") {
    std::mt19937_64 rng(37);
    Kernel g = random_kernel(rng, fs("X", 3), fs("Y", 2));
    CHECK(max_abs_diff(causal_trace(g, 0), g) <= 1e-12);
    Kernel padded = tensor(g, identity_kernel(fs("U", 1)));
    CHECK(max_abs_diff(causal_trace(padded, 1), g) <= 1e-12);
}

TEST_CASE("causal trace agrees with the matrix diagonal sum and stays stochastic") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 40; ++i) {
        Factors x = random_factors(rng, 0, 2, 1, 4, "X");
        Factors y = random_factors(rng, 0, 2, 1, 4, "Y");
        Factors w = random_factors(rng, 1, 1, 1, 4, "W");
        NsKernel ns = random_nonsignalling(rng, x, w, y, w, i % 4 == 0);
        Kernel traced = causal_trace(ns.f, 1);
        CHECK(max_abs_diff(traced.mat(), mat_trace(ns.f.mat(), 1)) <= 1e-9);
        for (double s : traced.mat().row_sums()) CHECK(std::abs(s - 1.0) <= 1e-9);
    }
}

TEST_CASE("matrix trace of the identity is the cardinality scalar") {
    for (int n = 2; n <= 4; ++n) {
        Factors w = {FinSet("W", n)};
        NonnegMatrix tr = mat_trace(identity_kernel(w).mat(), 1);
        CHECK(tr.dom_size() == 1);
        CHECK(tr.cod_size() == 1);
        CHECK(tr.at(0, 0) == double(n));
    }
    // The identity is discardable but signalling; its matrix trace is not a
    // normalized kernel (row sum 2 at |W| = 2).
    Factors w2 = {FinSet("W", 2)};
    NonnegMatrix tr2 = mat_trace(identity_kernel(w2).mat(), 1);
    CHECK(tr2.at(0, 0) == 2.0);
    CHECK_THROWS_AS(Kernel{tr2}, Error);
}

TEST_CASE("marginalization reorders and sums out cod factors") {
    std::mt19937_64 rng(43);
    Kernel f = random_kernel(rng, fs("A", 2), concat_factors(fs("X", 2), fs("Y", 3)));
    Kernel mx = marginal(f, {0});
    Kernel my = marginal(f, {1});
    Kernel swapped = marginal(f, {1, 0});
    for (int a = 0; a < 2; ++a) {
        for (int x = 0; x < 2; ++x) {
            double acc = 0.0;
            for (int y = 0; y < 3; ++y) acc += f.at(a, x * 3 + y);
            CHECK(mx.at(a, x) == doctest::Approx(acc).epsilon(1e-12));
        }
        for (int y = 0; y < 3; ++y) {
            double acc = 0.0;
            for (int x = 0; x < 2; ++x) acc += f.at(a, x * 3 + y);
            CHECK(my.at(a, y) == doctest::Approx(acc).epsilon(1e-12));
            for (int x = 0; x < 2; ++x)
                CHECK(swapped.at(a, y * 2 + x) == doctest::Approx(f.at(a, x * 3 + y)));
        }
    }
}
