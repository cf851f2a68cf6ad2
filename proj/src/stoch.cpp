#include "markov/stoch.hpp"

#include <algorithm>
#include <cmath>

namespace markov {

std::int64_t total_card(const Factors& fs) {
    std::int64_t n = 1;
    for (const auto& f : fs) n *= f.card;
    return n;
}

Factors concat_factors(const Factors& a, const Factors& b) {
    Factors out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

Factors take_factors(const Factors& fs, int n) { return Factors(fs.begin(), fs.begin() + n); }
Factors drop_factors(const Factors& fs, int n) { return Factors(fs.begin() + n, fs.end()); }

bool same_card(const Factors& a, const Factors& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i].card != b[i].card) return false;
    return true;
}

NonnegMatrix::NonnegMatrix(Factors dom, Factors cod, std::vector<double> entries)
    : dom_(std::move(dom)),
      cod_(std::move(cod)),
      dom_size_(total_card(dom_)),
      cod_size_(total_card(cod_)),
      entries_(std::move(entries)) {
    if (static_cast<std::int64_t>(entries_.size()) != dom_size_ * cod_size_)
        throw Error("matrix: entry count does not match index space");
    for (double v : entries_) {
        if (!std::isfinite(v)) throw Error("matrix: non-finite entry");
        if (v < 0.0) throw Error("matrix: negative entry");
    }
}

NonnegMatrix NonnegMatrix::zeros(Factors dom, Factors cod) {
    std::int64_t n = total_card(dom) * total_card(cod);
    return NonnegMatrix(std::move(dom), std::move(cod), std::vector<double>(n, 0.0));
}

std::vector<double> NonnegMatrix::row_sums() const {
    std::vector<double> sums(dom_size_, 0.0);
    for (std::int64_t x = 0; x < dom_size_; ++x)
        for (std::int64_t y = 0; y < cod_size_; ++y) sums[x] += at(x, y);
    return sums;
}

Kernel::Kernel(Factors dom, Factors cod, std::vector<double> entries, const Tolerances& tol)
    : Kernel(NonnegMatrix(std::move(dom), std::move(cod), std::move(entries)), tol) {}

Kernel::Kernel(NonnegMatrix m, const Tolerances& tol) : m_(std::move(m)) {
    for (double s : m_.row_sums())
        if (std::abs(s - 1.0) > tol.row)
            throw Error("kernel: row sum " + std::to_string(s) + " is not 1");
}

NonnegMatrix mat_compose(const NonnegMatrix& g, const NonnegMatrix& f) {
    if (f.cod_size() != g.dom_size() || !same_card(f.cod(), g.dom()))
        throw Error("compose: dimension mismatch");
    NonnegMatrix out = NonnegMatrix::zeros(f.dom(), g.cod());
    for (std::int64_t x = 0; x < f.dom_size(); ++x)
        for (std::int64_t y = 0; y < f.cod_size(); ++y) {
            double fv = f.at(x, y);
            if (fv == 0.0) continue;
            for (std::int64_t z = 0; z < g.cod_size(); ++z) out.add(x, z, fv * g.at(y, z));
        }
    return out;
}

NonnegMatrix mat_tensor(const NonnegMatrix& f, const NonnegMatrix& g) {
    NonnegMatrix out = NonnegMatrix::zeros(concat_factors(f.dom(), g.dom()),
                                           concat_factors(f.cod(), g.cod()));
    for (std::int64_t x1 = 0; x1 < f.dom_size(); ++x1)
        for (std::int64_t x2 = 0; x2 < g.dom_size(); ++x2)
            for (std::int64_t y1 = 0; y1 < f.cod_size(); ++y1)
                for (std::int64_t y2 = 0; y2 < g.cod_size(); ++y2)
                    out.set(x1 * g.dom_size() + x2, y1 * g.cod_size() + y2,
                            f.at(x1, y1) * g.at(x2, y2));
    return out;
}

namespace {

struct WSplit {
    Factors x, w_in, y, w_out;
    std::int64_t xs, wis, ys, wos;
};

WSplit split_w(const Factors& dom, const Factors& cod, int w_in_factors, int w_out_factors) {
    if (w_in_factors < 0 || w_in_factors > static_cast<int>(dom.size()) || w_out_factors < 0 ||
        w_out_factors > static_cast<int>(cod.size()))
        throw Error("feedback factor count out of range");
    WSplit s;
    s.x = take_factors(dom, static_cast<int>(dom.size()) - w_in_factors);
    s.w_in = drop_factors(dom, static_cast<int>(dom.size()) - w_in_factors);
    s.y = take_factors(cod, static_cast<int>(cod.size()) - w_out_factors);
    s.w_out = drop_factors(cod, static_cast<int>(cod.size()) - w_out_factors);
    s.xs = total_card(s.x);
    s.wis = total_card(s.w_in);
    s.ys = total_card(s.y);
    s.wos = total_card(s.w_out);
    return s;
}

}  // namespace

NonnegMatrix mat_trace(const NonnegMatrix& f, int w_factors) {
    auto s = split_w(f.dom(), f.cod(), w_factors, w_factors);
    if (!same_card(s.w_in, s.w_out)) throw Error("mat_trace: feedback factor mismatch");
    NonnegMatrix out = NonnegMatrix::zeros(s.x, s.y);
    for (std::int64_t x = 0; x < s.xs; ++x)
        for (std::int64_t y = 0; y < s.ys; ++y) {
            double acc = 0.0;
            for (std::int64_t w = 0; w < s.wos; ++w) acc += f.at(x * s.wis + w, y * s.wos + w);
            out.set(x, y, acc);
        }
    return out;
}

Kernel compose(const Kernel& g, const Kernel& f) { return Kernel(mat_compose(g.mat(), f.mat())); }

Kernel tensor(const Kernel& f, const Kernel& g) { return Kernel(mat_tensor(f.mat(), g.mat())); }

Kernel identity_kernel(Factors x) {
    std::int64_t n = total_card(x);
    NonnegMatrix m = NonnegMatrix::zeros(x, x);
    for (std::int64_t i = 0; i < n; ++i) m.set(i, i, 1.0);
    return Kernel(std::move(m));
}

Kernel swap_kernel(Factors a, Factors b) {
    std::int64_t as = total_card(a), bs = total_card(b);
    NonnegMatrix m = NonnegMatrix::zeros(concat_factors(a, b), concat_factors(b, a));
    for (std::int64_t i = 0; i < as; ++i)
        for (std::int64_t j = 0; j < bs; ++j) m.set(i * bs + j, j * as + i, 1.0);
    return Kernel(std::move(m));
}

Kernel copy_kernel(Factors x) {
    std::int64_t n = total_card(x);
    NonnegMatrix m = NonnegMatrix::zeros(x, concat_factors(x, x));
    for (std::int64_t i = 0; i < n; ++i) m.set(i, i * n + i, 1.0);
    return Kernel(std::move(m));
}

Kernel del_kernel(Factors x) {
    std::int64_t n = total_card(x);
    return Kernel(NonnegMatrix(std::move(x), {}, std::vector<double>(n, 1.0)));
}

Kernel uniform_kernel(Factors dom, Factors cod) {
    std::int64_t n = total_card(dom), m = total_card(cod);
    return Kernel(NonnegMatrix(std::move(dom), std::move(cod),
                               std::vector<double>(n * m, 1.0 / static_cast<double>(m))));
}

Kernel marginal(const Kernel& f, const std::vector<int>& kept_positions) {
    const auto& cod = f.cod();
    int k = static_cast<int>(cod.size());
    std::vector<std::int64_t> stride(k, 1);
    for (int i = k - 2; i >= 0; --i) stride[i] = stride[i + 1] * cod[i + 1].card;
    Factors kept;
    for (int pos : kept_positions) {
        if (pos < 0 || pos >= k) throw Error("marginal: bad cod position");
        kept.push_back(cod[pos]);
    }
    NonnegMatrix out = NonnegMatrix::zeros(f.dom(), kept);
    for (std::int64_t x = 0; x < f.dom_size(); ++x)
        for (std::int64_t y = 0; y < f.cod_size(); ++y) {
            std::int64_t idx = 0;
            for (int pos : kept_positions) idx = idx * cod[pos].card + (y / stride[pos]) % cod[pos].card;
            out.add(x, idx, f.at(x, y));
        }
    return Kernel(std::move(out));
}

double max_abs_diff(const NonnegMatrix& a, const NonnegMatrix& b) {
    if (a.dom_size() != b.dom_size() || a.cod_size() != b.cod_size())
        throw Error("max_abs_diff: dimension mismatch");
    double m = 0.0;
    for (std::int64_t x = 0; x < a.dom_size(); ++x)
        for (std::int64_t y = 0; y < a.cod_size(); ++y)
            m = std::max(m, std::abs(a.at(x, y) - b.at(x, y)));
    return m;
}

double max_abs_diff(const Kernel& a, const Kernel& b) { return max_abs_diff(a.mat(), b.mat()); }

bool kernels_equal(const Kernel& a, const Kernel& b, const Tolerances& tol) {
    return same_card(a.dom(), b.dom()) && same_card(a.cod(), b.cod()) &&
           max_abs_diff(a, b) <= tol.eq;
}

std::vector<std::int64_t> support(const Kernel& p, const Tolerances& tol) {
    std::vector<std::int64_t> out;
    for (std::int64_t y = 0; y < p.cod_size(); ++y) {
        for (std::int64_t x = 0; x < p.dom_size(); ++x) {
            if (p.at(x, y) > tol.supp) {
                out.push_back(y);
                break;
            }
        }
    }
    return out;
}

bool as_equal(const Kernel& f1, const Kernel& f2, const Kernel& p, const Tolerances& tol) {
    if (!same_card(f1.dom(), f2.dom()) || !same_card(f1.cod(), f2.cod()))
        throw Error("as_equal: f1/f2 type mismatch");
    if (p.cod().size() > f1.dom().size() ||
        !same_card(p.cod(), drop_factors(f1.dom(), static_cast<int>(f1.dom().size() - p.cod().size()))))
        throw Error("as_equal: p does not match the trailing factors of dom");
    std::int64_t xs = p.cod_size();
    std::int64_t ws = f1.dom_size() / xs;
    auto supp = support(p, tol);
    for (std::int64_t w = 0; w < ws; ++w)
        for (std::int64_t x : supp)
            for (std::int64_t y = 0; y < f1.cod_size(); ++y)
                if (std::abs(f1.at(w * xs + x, y) - f2.at(w * xs + x, y)) > tol.eq) return false;
    return true;
}

bool abs_cont(const Kernel& p, const Kernel& q, const Tolerances& tol) {
    if (!same_card(p.cod(), q.cod())) throw Error("abs_cont: cod mismatch");
    auto sp = support(p, tol);
    auto sq = support(q, tol);
    return std::includes(sq.begin(), sq.end(), sp.begin(), sp.end());
}

bool is_atomic(const Kernel& p, const Tolerances& tol) {
    Kernel copied = compose(copy_kernel(p.cod()), p);
    Kernel squared = tensor(p, p);
    return abs_cont(copied, squared, tol);
}

bool is_deterministic(const Kernel& f, const Tolerances& tol) {
    for (double v : f.mat().entries())
        if (std::abs(v) > tol.eq && std::abs(v - 1.0) > tol.eq) return false;
    return true;
}

Kernel conditional(const Kernel& f, int x_factors, const Tolerances& tol) {
    if (x_factors < 0 || x_factors > static_cast<int>(f.cod().size()))
        throw Error("conditional: bad split");
    Factors xf = take_factors(f.cod(), x_factors);
    Factors yf = drop_factors(f.cod(), x_factors);
    std::int64_t xs = total_card(xf), ys = total_card(yf), as = f.dom_size();
    NonnegMatrix out = NonnegMatrix::zeros(concat_factors(xf, f.dom()), yf);
    for (std::int64_t x = 0; x < xs; ++x)
        for (std::int64_t a = 0; a < as; ++a) {
            double s = 0.0;
            for (std::int64_t y = 0; y < ys; ++y) s += f.at(a, x * ys + y);
            for (std::int64_t y = 0; y < ys; ++y)
                out.set(x * as + a, y,
                        s > tol.null ? f.at(a, x * ys + y) / s : 1.0 / static_cast<double>(ys));
        }
    return Kernel(std::move(out));
}

Kernel bayes_inverse(const Kernel& f, const Kernel& p, const Tolerances& tol) {
    if (!same_card(p.cod(), f.dom())) throw Error("bayes_inverse: prior/kernel mismatch");
    std::int64_t as = p.dom_size(), xs = f.dom_size(), ys = f.cod_size();
    NonnegMatrix out = NonnegMatrix::zeros(concat_factors(p.dom(), f.cod()), f.dom());
    for (std::int64_t a = 0; a < as; ++a)
        for (std::int64_t y = 0; y < ys; ++y) {
            double evidence = 0.0;
            for (std::int64_t x = 0; x < xs; ++x) evidence += p.at(a, x) * f.at(x, y);
            for (std::int64_t x = 0; x < xs; ++x)
                out.set(a * ys + y, x,
                        evidence > tol.null ? p.at(a, x) * f.at(x, y) / evidence
                                            : 1.0 / static_cast<double>(xs));
        }
    return Kernel(std::move(out));
}

std::optional<Kernel> is_nonsignalling_sem(const Kernel& f, int w_in_factors, int w_out_factors,
                                           const Tolerances& tol) {
    auto s = split_w(f.dom(), f.cod(), w_in_factors, w_out_factors);
    // Per-slice W marginals: marg[x][w'][w] = sum_y f(y,w | x,w').
    std::vector<double> mean(s.xs * s.wos, 0.0);
    std::vector<double> marg(s.wis * s.wos);
    double worst = 0.0;
    for (std::int64_t x = 0; x < s.xs; ++x) {
        std::fill(marg.begin(), marg.end(), 0.0);
        for (std::int64_t wi = 0; wi < s.wis; ++wi)
            for (std::int64_t y = 0; y < s.ys; ++y)
                for (std::int64_t wo = 0; wo < s.wos; ++wo)
                    marg[wi * s.wos + wo] += f.at(x * s.wis + wi, y * s.wos + wo);
        for (std::int64_t wo = 0; wo < s.wos; ++wo) {
            double m = 0.0;
            for (std::int64_t wi = 0; wi < s.wis; ++wi) m += marg[wi * s.wos + wo];
            m /= static_cast<double>(s.wis);
            mean[x * s.wos + wo] = m;
            for (std::int64_t wi = 0; wi < s.wis; ++wi)
                worst = std::max(worst, std::abs(marg[wi * s.wos + wo] - m));
        }
    }
    if (worst > tol.ns) return std::nullopt;
    return Kernel(s.x, s.w_out, std::move(mean), tol);
}

Disintegration disintegrate(const Kernel& f, const Kernel& f_s, int w_in_factors, int w_out_factors,
                            const Tolerances& tol) {
    auto s = split_w(f.dom(), f.cod(), w_in_factors, w_out_factors);
    if (!same_card(f_s.dom(), s.x) || !same_card(f_s.cod(), s.w_out))
        throw Error("disintegrate: f_s shape mismatch");
    Factors fp_dom = concat_factors(s.w_out, concat_factors(s.x, s.w_in));
    NonnegMatrix fp = NonnegMatrix::zeros(fp_dom, s.y);
    for (std::int64_t w = 0; w < s.wos; ++w)
        for (std::int64_t x = 0; x < s.xs; ++x)
            for (std::int64_t wi = 0; wi < s.wis; ++wi) {
                double slice_sum = 0.0;
                for (std::int64_t y = 0; y < s.ys; ++y)
                    slice_sum += f.at(x * s.wis + wi, y * s.wos + w);
                std::int64_t row = (w * s.xs + x) * s.wis + wi;
                // Dividing by the slice sum (= f_s up to the ns tolerance)
                // keeps the rows normalized; null cells are uniform.
                bool null_cell = f_s.at(x, w) <= tol.null || slice_sum <= tol.null;
                for (std::int64_t y = 0; y < s.ys; ++y)
                    fp.set(row, y,
                           null_cell ? 1.0 / static_cast<double>(s.ys)
                                     : f.at(x * s.wis + wi, y * s.wos + w) / slice_sum);
            }
    return Disintegration{f_s, Kernel(std::move(fp), tol)};
}

namespace {

struct PieceDims {
    std::int64_t ws, xs, wis, ys;
    Factors x, w, w_in, y;
};

// The remainder's domain is the factor list W ++ X ++ W', with the W and X
// segments matching the marginal's cod/dom factor lists positionally.
PieceDims piece_dims(const Kernel& w_marginal, const Kernel& remainder) {
    PieceDims d;
    d.x = w_marginal.dom();
    d.w = w_marginal.cod();
    d.xs = total_card(d.x);
    d.ws = total_card(d.w);
    d.y = remainder.cod();
    d.ys = total_card(d.y);
    const auto& rd = remainder.dom();
    int lead = static_cast<int>(d.w.size() + d.x.size());
    if (static_cast<int>(rd.size()) < lead ||
        !same_card(take_factors(rd, static_cast<int>(d.w.size())), d.w) ||
        !same_card(take_factors(drop_factors(rd, static_cast<int>(d.w.size())),
                                static_cast<int>(d.x.size())),
                   d.x))
        throw Error("disintegration pieces: factor split mismatch");
    d.w_in = drop_factors(rd, lead);
    d.wis = total_card(d.w_in);
    return d;
}

}  // namespace

Kernel recompose(const Kernel& w_marginal, const Kernel& remainder, const Tolerances& tol) {
    auto d = piece_dims(w_marginal, remainder);
    NonnegMatrix out = NonnegMatrix::zeros(concat_factors(d.x, d.w_in), concat_factors(d.y, d.w));
    for (std::int64_t x = 0; x < d.xs; ++x)
        for (std::int64_t wi = 0; wi < d.wis; ++wi)
            for (std::int64_t w = 0; w < d.ws; ++w) {
                double sw = w_marginal.at(x, w);
                if (sw == 0.0) continue;
                std::int64_t row = (w * d.xs + x) * d.wis + wi;
                for (std::int64_t y = 0; y < d.ys; ++y)
                    out.set(x * d.wis + wi, y * d.ws + w, sw * remainder.at(row, y));
            }
    return Kernel(std::move(out), tol);
}

Kernel trace_from_disintegration(const Kernel& w_marginal, const Kernel& remainder,
                                 const Tolerances& tol) {
    auto d = piece_dims(w_marginal, remainder);
    if (d.wis != d.ws) throw Error("trace_from_disintegration: feedback dimension mismatch");
    NonnegMatrix out = NonnegMatrix::zeros(d.x, d.y);
    for (std::int64_t x = 0; x < d.xs; ++x)
        for (std::int64_t w = 0; w < d.ws; ++w) {
            double sw = w_marginal.at(x, w);
            if (sw == 0.0) continue;
            std::int64_t row = (w * d.xs + x) * d.ws + w;
            for (std::int64_t y = 0; y < d.ys; ++y) out.add(x, y, sw * remainder.at(row, y));
        }
    return Kernel(std::move(out), tol);
}

Kernel causal_trace(const Kernel& f, int w_factors, const Tolerances& tol) {
    auto s = split_w(f.dom(), f.cod(), w_factors, w_factors);
    if (!same_card(s.w_in, s.w_out)) throw Error("causal_trace: feedback factor mismatch");
    auto f_s = is_nonsignalling_sem(f, w_factors, w_factors, tol);
    if (!f_s) throw SignallingError("causal_trace: morphism is signalling on the feedback factors");
    auto dis = disintegrate(f, *f_s, w_factors, w_factors, tol);
    Kernel traced = trace_from_disintegration(dis.w_marginal, dis.remainder, tol);
    NonnegMatrix diag = mat_trace(f.mat(), w_factors);
    if (max_abs_diff(traced.mat(), diag) > tol.eq)
        throw Error("causal_trace: disintegration and diagonal-sum paths disagree");
    return traced;
}

}  // namespace markov
