#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "markov/hypergraph.hpp"  // Error

namespace markov {

/// Numeric thresholds for the finite-stochastic backend.
struct Tolerances {
    double row = 1e-9;    // row-sum deviation allowed for stochastic matrices
    double eq = 1e-9;     // entrywise kernel equality / recomposition residual
    double ns = 1e-9;     // non-signalling slice agreement
    double supp = 1e-12;  // support membership threshold (entries strictly above)
    double null = 1e-12;  // null-column threshold for conditioning
};

class SignallingError : public Error {
public:
    using Error::Error;
};

/// A nonempty finite set. Cardinality 0 is rejected (cancellability).
struct FinSet {
    std::string name;
    int card;
    FinSet(std::string n, int c) : name(std::move(n)), card(c) {
        if (c < 1) throw Error("FinSet " + name + ": cardinality must be >= 1");
    }
    bool operator==(const FinSet&) const = default;
};

/// An object of the finite backend: a tensor product of finite sets.
/// Tuples index lexicographically with the leftmost factor most significant.
using Factors = std::vector<FinSet>;

std::int64_t total_card(const Factors& fs);
Factors concat_factors(const Factors& a, const Factors& b);
Factors take_factors(const Factors& fs, int n);
Factors drop_factors(const Factors& fs, int n);
bool same_card(const Factors& a, const Factors& b);

/// Dense matrix with nonnegative entries over factored index sets: a
/// morphism of the compact-closed oracle category.
class NonnegMatrix {
public:
    NonnegMatrix(Factors dom, Factors cod, std::vector<double> entries);
    static NonnegMatrix zeros(Factors dom, Factors cod);

    const Factors& dom() const { return dom_; }
    const Factors& cod() const { return cod_; }
    std::int64_t dom_size() const { return dom_size_; }
    std::int64_t cod_size() const { return cod_size_; }

    double at(std::int64_t x, std::int64_t y) const { return entries_[x * cod_size_ + y]; }
    void set(std::int64_t x, std::int64_t y, double v) { entries_[x * cod_size_ + y] = v; }
    void add(std::int64_t x, std::int64_t y, double v) { entries_[x * cod_size_ + y] += v; }
    const std::vector<double>& entries() const { return entries_; }

    std::vector<double> row_sums() const;

private:
    Factors dom_, cod_;
    std::int64_t dom_size_, cod_size_;
    std::vector<double> entries_;
};

/// Row-stochastic matrix over factored finite sets. Rows sum to 1 within
/// the row tolerance; checked at construction.
class Kernel {
public:
    Kernel(Factors dom, Factors cod, std::vector<double> entries, const Tolerances& tol = {});
    explicit Kernel(NonnegMatrix m, const Tolerances& tol = {});

    const NonnegMatrix& mat() const { return m_; }
    const Factors& dom() const { return m_.dom(); }
    const Factors& cod() const { return m_.cod(); }
    std::int64_t dom_size() const { return m_.dom_size(); }
    std::int64_t cod_size() const { return m_.cod_size(); }
    double at(std::int64_t x, std::int64_t y) const { return m_.at(x, y); }

private:
    NonnegMatrix m_;
};

// Mat(R+) operations (no stochasticity requirements).
NonnegMatrix mat_compose(const NonnegMatrix& g, const NonnegMatrix& f);  // g after f
NonnegMatrix mat_tensor(const NonnegMatrix& f, const NonnegMatrix& g);

/// Compact-closed trace: sum over the diagonal of the trailing w factors,
/// tr(f)(y|x) = sum_w f(y,w|x,w). No normalization guarantee.
NonnegMatrix mat_trace(const NonnegMatrix& f, int w_factors);

// FinStoch structural morphisms and categorical operations.
Kernel compose(const Kernel& g, const Kernel& f);  // g after f
Kernel tensor(const Kernel& f, const Kernel& g);
Kernel identity_kernel(Factors x);
Kernel swap_kernel(Factors a, Factors b);  // A (x) B -> B (x) A
Kernel copy_kernel(Factors x);             // X -> X (x) X
Kernel del_kernel(Factors x);              // X -> I
Kernel uniform_kernel(Factors dom, Factors cod);

/// Sums out the cod factors not listed; kept factors appear in the given
/// order.
Kernel marginal(const Kernel& f, const std::vector<int>& kept_positions);

double max_abs_diff(const NonnegMatrix& a, const NonnegMatrix& b);
double max_abs_diff(const Kernel& a, const Kernel& b);
bool kernels_equal(const Kernel& a, const Kernel& b, const Tolerances& tol = {});

/// Cod indices that receive positive mass from some input.
std::vector<std::int64_t> support(const Kernel& p, const Tolerances& tol = {});

/// Almost-sure equality: f1, f2 : W (x) X -> Y agree on every column whose X
/// part lies in the support of p : A -> X, for all W slices.
bool as_equal(const Kernel& f1, const Kernel& f2, const Kernel& p, const Tolerances& tol = {});

/// Absolute continuity: supp(p) included in supp(q).
bool abs_cont(const Kernel& p, const Kernel& q, const Tolerances& tol = {});

/// Atomicity of p : A -> X, as support inclusion of copy.p in p (x) p.
bool is_atomic(const Kernel& p, const Tolerances& tol = {});

/// Every entry within tolerance of 0 or 1 (equivalent to commuting with
/// copy for row-stochastic matrices).
bool is_deterministic(const Kernel& f, const Tolerances& tol = {});

/// Conditional of f : A -> X (x) Y on its first `x_factors` output factors:
/// the kernel f|_X : X (x) A -> Y with f(x,y|a) = (sum_y' f(x,y'|a)) * f|_X(y|x,a).
/// Null columns get the uniform distribution.
Kernel conditional(const Kernel& f, int x_factors, const Tolerances& tol = {});

/// Bayesian inverse of f : X -> Y with respect to the prior p : A -> X:
/// the kernel A (x) Y -> X with p(x|a) f(y|x) = (sum_x' p(x'|a) f(y|x')) * inv(x|a,y).
/// Uniform on posterior-null (a,y) cells.
Kernel bayes_inverse(const Kernel& f, const Kernel& p, const Tolerances& tol = {});

/// Non-signalling test for f : X (x) W' -> Y (x) W (trailing factor counts
/// given): the W-output marginal must not depend on the W' input. When all
/// slices agree within the ns tolerance, returns their mean as f_s : X -> W.
std::optional<Kernel> is_nonsignalling_sem(const Kernel& f, int w_in_factors, int w_out_factors,
                                           const Tolerances& tol = {});

/// A disintegration f = (copy; f_s on one branch; copy w; f_p) of a
/// non-signalling morphism: w_marginal : X -> W, remainder : W (x) X (x) W' -> Y.
struct Disintegration {
    Kernel w_marginal;
    Kernel remainder;
};

/// Computes a disintegration given a verified f_s. Remainder rows on
/// f_s-null cells follow the uniform convention.
Disintegration disintegrate(const Kernel& f, const Kernel& f_s, int w_in_factors, int w_out_factors,
                            const Tolerances& tol = {});

/// Rebuilds f : X (x) W' -> Y (x) W from disintegration pieces.
Kernel recompose(const Kernel& w_marginal, const Kernel& remainder, const Tolerances& tol = {});

/// The trace formula evaluated on explicit disintegration pieces:
/// tr(y|x) = sum_w f_s(w|x) f_p(y|w,x,w). Exposed so well-definedness across
/// disintegration choices can be checked directly.
Kernel trace_from_disintegration(const Kernel& w_marginal, const Kernel& remainder,
                                 const Tolerances& tol = {});

/// Causal trace of a non-signalling f : X (x) W -> Y (x) W. Computed from a
/// disintegration and cross-checked against the diagonal sum; throws
/// SignallingError if the non-signalling test fails.
Kernel causal_trace(const Kernel& f, int w_factors, const Tolerances& tol = {});

}  // namespace markov
