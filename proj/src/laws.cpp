#include "markov/laws.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "markov/combs.hpp"
#include "markov/contraction.hpp"
#include "markov/diagram.hpp"
#include "markov/generators.hpp"
#include "markov/interp.hpp"

namespace markov {

int LawReport::total_violations() const {
    int n = 0;
    for (const auto& r : results) n += r.violations;
    return n;
}

namespace {

std::uint64_t fnv1a(const char* s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (; *s; ++s) h = (h ^ static_cast<unsigned char>(*s)) * 1099511628211ULL;
    return h;
}

std::mt19937_64 case_rng(std::uint64_t seed, std::uint64_t tag, int idx) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (tag + 1) +
                      static_cast<std::uint64_t>(idx) * 0xBF58476D1CE4E5B9ULL;
    std::mt19937_64 rng(z);
    rng.discard(8);
    return rng;
}

struct Acc {
    LawResult r;
    explicit Acc(std::string name) { r.name = std::move(name); }
    void pass() { r.cases++; }
    void fail() {
        r.cases++;
        r.violations++;
    }
    void record(double residual, double eps) {
        r.cases++;
        r.worst_residual = std::max(r.worst_residual, residual);
        if (!(residual <= eps)) r.violations++;
    }
};

template <typename Fn>
void check(Acc& acc, Fn&& fn) {
    try {
        if (fn())
            acc.pass();
        else
            acc.fail();
    } catch (const Error&) {
        acc.fail();
    }
}

template <typename Fn>
void measure(Acc& acc, double eps, Fn&& fn) {
    try {
        acc.record(fn(), eps);
    } catch (const Error&) {
        acc.fail();
    }
}

double row_sum_deviation(const Kernel& k) {
    double worst = 0.0;
    for (double s : k.mat().row_sums()) worst = std::max(worst, std::abs(s - 1.0));
    return worst;
}

}  // namespace

std::vector<LawResult> kernel_trace_axiom_laws(std::uint64_t seed, int cases, double eps,
                                               int max_card) {
    Acc tight("trace tightening"), slide("trace sliding"), vanish("trace vanishing"),
        assoc("trace associativity"), super("trace superposition"), yank("trace yanking");
    const std::uint64_t tag = fnv1a("kernel_trace_axioms");
    for (int i = 0; i < cases; ++i) {
        auto rng = case_rng(seed, tag, i);
        Factors x = random_factors(rng, 0, 2, 1, max_card, "X");
        Factors y = random_factors(rng, 0, 2, 1, max_card, "Y");
        Factors w = random_factors(rng, 1, 1, 1, max_card, "W");
        bool sparse = i % 4 == 0;
        NsKernel ns = random_nonsignalling(rng, x, w, y, w, sparse);
        Kernel id_w = identity_kernel(w);

        measure(tight, eps, [&] {
            Factors x2 = random_factors(rng, 0, 2, 1, max_card, "P");
            Factors y2 = random_factors(rng, 0, 2, 1, max_card, "Q");
            Kernel pre = random_kernel(rng, x2, x);
            Kernel post = random_kernel(rng, y, y2);
            Kernel whole = compose(tensor(post, id_w), compose(ns.f, tensor(pre, id_w)));
            Kernel lhs = causal_trace(whole, 1);
            Kernel rhs = compose(post, compose(causal_trace(ns.f, 1), pre));
            return max_abs_diff(lhs, rhs);
        });

        measure(slide, eps, [&] {
            Factors w_in = random_factors(rng, 1, 1, 1, max_card, "V");
            Factors w_out = random_factors(rng, 1, 1, 1, max_card, "U");
            NsKernel f2 = random_nonsignalling(rng, x, w_in, y, w_out, false);
            Kernel g = random_kernel(rng, w_out, w_in);
            Kernel lhs = causal_trace(compose(tensor(identity_kernel(y), g), f2.f), 1);
            Kernel rhs = causal_trace(compose(f2.f, tensor(identity_kernel(x), g)), 1);
            return max_abs_diff(lhs, rhs);
        });

        measure(vanish, eps, [&] {
            Kernel base = random_kernel(rng, x, y);
            double r = max_abs_diff(causal_trace(base, 0), base);
            Kernel padded = tensor(base, identity_kernel({FinSet("U", 1)}));
            r = std::max(r, max_abs_diff(causal_trace(padded, 1), base));
            return r;
        });

        measure(assoc, eps, [&] {
            Factors u = random_factors(rng, 1, 1, 1, max_card, "U");
            Factors v = random_factors(rng, 1, 1, 1, max_card, "V");
            NsKernel f3 = random_nonsignalling(rng, x, concat_factors(u, v), y,
                                               concat_factors(u, v), sparse);
            Kernel both = causal_trace(f3.f, 2);
            Kernel outer = causal_trace(causal_trace(f3.f, 1), 1);
            return max_abs_diff(both, outer);
        });

        measure(super, eps, [&] {
            Factors x2 = random_factors(rng, 0, 2, 1, max_card, "P");
            Factors y2 = random_factors(rng, 0, 2, 1, max_card, "Q");
            Kernel side = random_kernel(rng, x2, y2);
            Kernel lhs = causal_trace(tensor(side, ns.f), 1);
            Kernel rhs = tensor(side, causal_trace(ns.f, 1));
            return max_abs_diff(lhs, rhs);
        });

        measure(yank, eps, [&] {
            return max_abs_diff(causal_trace(swap_kernel(w, w), 1), identity_kernel(w));
        });
    }
    return {tight.r, slide.r, vanish.r, assoc.r, super.r, yank.r};
}

LawResult yanking_exact_law(int max_w) {
    Acc acc("yanking exact");
    for (int n = 1; n <= max_w; ++n) {
        Factors w = {FinSet("W", n)};
        Kernel traced = causal_trace(swap_kernel(w, w), 1);
        Kernel id = identity_kernel(w);
        bool exact = true;
        for (std::int64_t i = 0; i < traced.dom_size(); ++i)
            for (std::int64_t j = 0; j < traced.cod_size(); ++j)
                if (traced.at(i, j) != id.at(i, j)) exact = false;
        exact ? acc.pass() : acc.fail();
    }
    return acc.r;
}

LawResult mat_trace_scalar_law() {
    Acc acc("trace of identity is |W|");
    for (int n = 2; n <= 4; ++n) {
        Factors w = {FinSet("W", n)};
        NonnegMatrix traced = mat_trace(identity_kernel(w).mat(), 1);
        bool ok = traced.dom_size() == 1 && traced.cod_size() == 1 &&
                  traced.at(0, 0) == static_cast<double>(n);
        ok ? acc.pass() : acc.fail();
    }
    return acc.r;
}

LawResult diagonal_oracle_law(std::uint64_t seed, int cases, double eps) {
    Acc acc("diagonal-sum oracle");
    const std::uint64_t tag = fnv1a("diagonal_oracle");
    for (int i = 0; i < cases; ++i) {
        auto rng = case_rng(seed, tag, i);
        measure(acc, eps, [&] {
            Factors x = random_factors(rng, 0, 2, 1, 4, "X");
            Factors y = random_factors(rng, 0, 2, 1, 4, "Y");
            Factors w = random_factors(rng, 1, 1, 1, 4, "W");
            NsKernel ns = random_nonsignalling(rng, x, w, y, w, i % 3 == 0);
            Kernel traced = causal_trace(ns.f, 1);
            double r = max_abs_diff(traced.mat(), mat_trace(ns.f.mat(), 1));
            return std::max(r, row_sum_deviation(traced));
        });
    }
    return acc.r;
}

LawResult well_definedness_law(std::uint64_t seed, int cases, double eps) {
    Acc acc("trace well-definedness");
    const std::uint64_t tag = fnv1a("well_definedness");
    for (int i = 0; i < cases; ++i) {
        auto rng = case_rng(seed, tag, i);
        measure(acc, eps, [&] {
            Factors x = random_factors(rng, 0, 1, 1, 3, "X");
            Factors w = random_factors(rng, 1, 1, 2, 4, "W");
            Factors y = random_factors(rng, 1, 2, 1, 3, "Y");
            std::int64_t xs = total_card(x), ws = total_card(w), ys = total_card(y);

            // Feedback marginal with an exact zero in every row.
            std::vector<double> fs_e(xs * ws, 0.0);
            for (std::int64_t xi = 0; xi < xs; ++xi) {
                int zero = rand_int(rng, 0, static_cast<int>(ws) - 1);
                double sum = 0.0;
                for (std::int64_t wi = 0; wi < ws; ++wi) {
                    if (wi == zero) continue;
                    double v = rand_unit(rng) + 1e-3;
                    fs_e[xi * ws + wi] = v;
                    sum += v;
                }
                for (std::int64_t wi = 0; wi < ws; ++wi) fs_e[xi * ws + wi] /= sum;
            }
            Kernel f_s(x, w, std::move(fs_e));

            Factors fp_dom = concat_factors(w, concat_factors(x, w));
            Kernel fp1 = random_kernel(rng, fp_dom, y);
            std::vector<double> fp2_e = fp1.mat().entries();
            for (std::int64_t wi = 0; wi < ws; ++wi)
                for (std::int64_t xi = 0; xi < xs; ++xi) {
                    if (f_s.at(xi, wi) != 0.0) continue;
                    for (std::int64_t wj = 0; wj < ws; ++wj) {
                        std::int64_t row = (wi * xs + xi) * ws + wj;
                        double sum = 0.0;
                        for (std::int64_t yi = 0; yi < ys; ++yi) {
                            double v = rand_unit(rng) + 1e-3;
                            fp2_e[row * ys + yi] = v;
                            sum += v;
                        }
                        for (std::int64_t yi = 0; yi < ys; ++yi) fp2_e[row * ys + yi] /= sum;
                    }
                }
            Kernel fp2(fp_dom, y, std::move(fp2_e));

            double r = max_abs_diff(trace_from_disintegration(f_s, fp1),
                                    trace_from_disintegration(f_s, fp2));
            return std::max(r, max_abs_diff(recompose(f_s, fp1), recompose(f_s, fp2)));
        });
    }
    return acc.r;
}

LawResult atomicity_law(std::uint64_t seed, int cases) {
    Acc acc("atomicity");
    const std::uint64_t tag = fnv1a("atomicity");
    for (int i = 0; i < cases; ++i) {
        auto rng = case_rng(seed, tag, i);
        check(acc, [&] {
            Factors a = random_factors(rng, 0, 2, 1, 4, "A");
            Factors x = random_factors(rng, 1, 2, 1, 4, "X");
            Kernel p = i % 2 == 0 ? random_kernel(rng, a, x) : random_sparse_kernel(rng, a, x);
            Kernel det = random_deterministic_kernel(rng, a, x);
            return is_atomic(p) && is_atomic(det) && is_deterministic(det);
        });
    }
    return acc.r;
}

LawResult support_order_law(std::uint64_t seed, int cases) {
    Acc acc("support preorder");
    const std::uint64_t tag = fnv1a("support_order");
    for (int i = 0; i < cases; ++i) {
        auto rng = case_rng(seed, tag, i);
        check(acc, [&] {
            Factors x = random_factors(rng, 1, 1, 2, 4, "X");
            Factors a = random_factors(rng, 0, 1, 1, 3, "A");
            Kernel p = random_sparse_kernel(rng, a, x);
            // Widen the support step by step: mixing keeps every old point.
            Kernel q = Kernel(a, x, [&] {
                Kernel fresh = random_sparse_kernel(rng, a, x);
                std::vector<double> e(p.dom_size() * p.cod_size());
                for (size_t k = 0; k < e.size(); ++k)
                    e[k] = 0.5 * p.mat().entries()[k] + 0.5 * fresh.mat().entries()[k];
                return e;
            }());
            Kernel r = Kernel(a, x, [&] {
                Kernel fresh = random_kernel(rng, a, x);
                std::vector<double> e(q.dom_size() * q.cod_size());
                for (size_t k = 0; k < e.size(); ++k)
                    e[k] = 0.5 * q.mat().entries()[k] + 0.5 * fresh.mat().entries()[k];
                return e;
            }());
            if (!abs_cont(p, p) || !abs_cont(p, q) || !abs_cont(q, r) || !abs_cont(p, r))
                return false;
            // Almost-sure equality is an equivalence for a fixed prior.
            Factors wdim = random_factors(rng, 0, 1, 1, 2, "W");
            Factors ydim = random_factors(rng, 1, 1, 1, 3, "Y");
            Kernel f1 = random_kernel(rng, concat_factors(wdim, x), ydim);
            auto off_support_variant = [&] {
                std::vector<double> e = f1.mat().entries();
                auto supp = support(p);
                std::set<std::int64_t> in_support(supp.begin(), supp.end());
                std::int64_t xs = total_card(x), ys = total_card(ydim);
                std::int64_t wsz = f1.dom_size() / xs;
                for (std::int64_t wv = 0; wv < wsz; ++wv)
                    for (std::int64_t xv = 0; xv < xs; ++xv) {
                        if (in_support.count(xv)) continue;
                        double sum = 0.0;
                        for (std::int64_t yv = 0; yv < ys; ++yv) {
                            double v = rand_unit(rng) + 1e-3;
                            e[(wv * xs + xv) * ys + yv] = v;
                            sum += v;
                        }
                        for (std::int64_t yv = 0; yv < ys; ++yv) e[(wv * xs + xv) * ys + yv] /= sum;
                    }
                return Kernel(concat_factors(wdim, x), ydim, std::move(e));
            };
            Kernel f2 = off_support_variant();
            Kernel f3 = off_support_variant();
            return as_equal(f1, f1, p) && as_equal(f1, f2, p) && as_equal(f2, f1, p) &&
                   as_equal(f2, f3, p) && as_equal(f1, f3, p);
        });
    }
    return acc.r;
}

LawResult conditional_law(std::uint64_t seed, int cases, double eps) {
    Acc acc("conditional recomposition");
    const std::uint64_t tag = fnv1a("conditional");
    for (int i = 0; i < cases; ++i) {
        auto rng = case_rng(seed, tag, i);
        measure(acc, eps, [&] {
            Factors a = random_factors(rng, 0, 1, 1, 3, "A");
            Factors x = random_factors(rng, 1, 1, 1, 4, "X");
            Factors y = random_factors(rng, 1, 1, 1, 4, "Y");
            Kernel f = i % 3 == 0 ? random_sparse_kernel(rng, a, concat_factors(x, y))
                                  : random_kernel(rng, a, concat_factors(x, y));
            Kernel cond = conditional(f, static_cast<int>(x.size()));
            std::vector<int> x_positions(x.size());
            for (size_t k = 0; k < x.size(); ++k) x_positions[k] = static_cast<int>(k);
            Kernel x_marginal = marginal(f, x_positions);
            std::int64_t as = f.dom_size(), xs = total_card(x), ys = total_card(y);
            double worst = 0.0;
            for (std::int64_t av = 0; av < as; ++av)
                for (std::int64_t xv = 0; xv < xs; ++xv)
                    for (std::int64_t yv = 0; yv < ys; ++yv) {
                        double lhs = f.at(av, xv * ys + yv);
                        double rhs = x_marginal.at(av, xv) * cond.at(xv * as + av, yv);
                        worst = std::max(worst, std::abs(lhs - rhs));
                    }
            return worst;
        });
    }
    return acc.r;
}

LawResult bayes_law(std::uint64_t seed, int cases, double eps) {
    Acc acc("Bayesian-inverse recomposition");
    const std::uint64_t tag = fnv1a("bayes");
    for (int i = 0; i < cases; ++i) {
        auto rng = case_rng(seed, tag, i);
        measure(acc, eps, [&] {
            Factors a = random_factors(rng, 0, 1, 1, 3, "A");
            Factors x = random_factors(rng, 1, 1, 1, 4, "X");
            Factors y = random_factors(rng, 1, 1, 1, 4, "Y");
            Kernel p = i % 3 == 0 ? random_sparse_kernel(rng, a, x) : random_kernel(rng, a, x);
            Kernel f = random_kernel(rng, x, y);
            Kernel inv = bayes_inverse(f, p);
            Kernel evidence = compose(f, p);
            std::int64_t as = p.dom_size(), xs = total_card(x), ys = total_card(y);
            double worst = 0.0;
            for (std::int64_t av = 0; av < as; ++av)
                for (std::int64_t xv = 0; xv < xs; ++xv)
                    for (std::int64_t yv = 0; yv < ys; ++yv) {
                        double joint = p.at(av, xv) * f.at(xv, yv);
                        double via_inverse = evidence.at(av, yv) * inv.at(av * ys + yv, xv);
                        worst = std::max(worst, std::abs(joint - via_inverse));
                    }
            return worst;
        });
    }
    return acc.r;
}

namespace {

Diagram gen_with_left(std::mt19937_64& rng, SignaturePtr sig, std::vector<TypeId> left,
                      int max_boxes = 4) {
    DiagramOptions opts;
    opts.max_boxes = max_boxes;
    opts.left_types = std::move(left);
    return random_diagram(rng, sig, opts);
}

Diagram gen_between(std::mt19937_64& rng, SignaturePtr sig, std::vector<TypeId> left,
                    std::vector<TypeId> right, int max_boxes = 4) {
    DiagramOptions opts;
    opts.max_boxes = max_boxes;
    opts.left_types = std::move(left);
    opts.right_types = std::move(right);
    return random_diagram(rng, sig, opts);
}

std::vector<TypeId> random_type_list(std::mt19937_64& rng, const Signature& sig, int lo, int hi) {
    std::vector<TypeId> out;
    int n = rand_int(rng, lo, hi);
    for (int i = 0; i < n; ++i) out.push_back(rand_int(rng, 0, sig.type_count() - 1));
    return out;
}

}  // namespace

std::vector<LawResult> free_structure_laws(std::uint64_t seed, int cases) {
    Acc unit("category unit"), cassoc("category associativity"), munit("monoidal unit"),
        massoc("monoidal associativity"), inter("interchange"),
        coassoc("comonoid coassociativity"), counit("comonoid counit"),
        cocomm("comonoid commutativity"), symnat("symmetry naturality"),
        swapinv("swap involution"), discard("discardability"), canon("canonical invariance");
    const std::uint64_t tag = fnv1a("free_structure");
    for (int i = 0; i < cases; ++i) {
        auto rng = case_rng(seed, tag, i);
        SignaturePtr sig = (i % 3 == 2) ? random_signature(rng) : law_signature();
        Diagram f = random_diagram(rng, sig);

        check(unit, [&] {
            return equal(compose(identity(sig, f.left_types()), f), f) &&
                   equal(compose(f, identity(sig, f.right_types())), f);
        });
        check(cassoc, [&] {
            Diagram g = gen_with_left(rng, sig, f.right_types());
            Diagram h = gen_with_left(rng, sig, g.right_types());
            return equal(compose(compose(f, g), h), compose(f, compose(g, h)));
        });
        check(munit, [&] {
            Diagram e = empty_diagram(sig);
            return equal(tensor(f, e), f) && equal(tensor(e, f), f);
        });
        check(massoc, [&] {
            Diagram g = random_diagram(rng, sig);
            Diagram h = random_diagram(rng, sig);
            return equal(tensor(tensor(f, g), h), tensor(f, tensor(g, h)));
        });
        check(inter, [&] {
            Diagram g = random_diagram(rng, sig);
            Diagram h = gen_with_left(rng, sig, f.right_types());
            Diagram k = gen_with_left(rng, sig, g.right_types());
            return equal(compose(tensor(f, g), tensor(h, k)), tensor(compose(f, h), compose(g, k)));
        });
        std::vector<TypeId> L = random_type_list(rng, *sig, 1, 2);
        check(coassoc, [&] {
            Diagram lhs = compose(copy_diagram(sig, L), tensor(copy_diagram(sig, L), identity(sig, L)));
            Diagram rhs = compose(copy_diagram(sig, L), tensor(identity(sig, L), copy_diagram(sig, L)));
            return equal(lhs, rhs);
        });
        check(counit, [&] {
            Diagram lhs = compose(copy_diagram(sig, L), tensor(del_diagram(sig, L), identity(sig, L)));
            Diagram rhs = compose(copy_diagram(sig, L), tensor(identity(sig, L), del_diagram(sig, L)));
            return equal(lhs, identity(sig, L)) && equal(rhs, identity(sig, L));
        });
        check(cocomm, [&] {
            return equal(compose(copy_diagram(sig, L), swap_diagram(sig, L, L)),
                         copy_diagram(sig, L));
        });
        check(symnat, [&] {
            Diagram g = random_diagram(rng, sig);
            Diagram lhs = compose(tensor(f, g), swap_diagram(sig, f.right_types(), g.right_types()));
            Diagram rhs = compose(swap_diagram(sig, f.left_types(), g.left_types()), tensor(g, f));
            return equal(lhs, rhs);
        });
        check(swapinv, [&] {
            std::vector<TypeId> A = random_type_list(rng, *sig, 0, 2);
            std::vector<TypeId> B = random_type_list(rng, *sig, 0, 2);
            std::vector<TypeId> AB = A;
            AB.insert(AB.end(), B.begin(), B.end());
            return equal(compose(swap_diagram(sig, A, B), swap_diagram(sig, B, A)),
                         identity(sig, AB));
        });
        check(discard, [&] {
            return equal(compose(f, del_diagram(sig, f.right_types())),
                         del_diagram(sig, f.left_types()));
        });
        check(canon, [&] { return equal(f, permuted_copy(f, rng)); });
    }
    return {unit.r,   cassoc.r, munit.r,   massoc.r,  inter.r,   coassoc.r,
            counit.r, cocomm.r, symnat.r,  swapinv.r, discard.r, canon.r};
}

std::vector<LawResult> free_contraction_laws(std::uint64_t seed, int cases) {
    Acc tight("contraction tightening"), slide("contraction sliding"),
        vanish("contraction vanishing"), assoc("contraction associativity"),
        super("contraction superposition"), yank("contraction yanking");
    const std::uint64_t tag = fnv1a("free_contraction");
    for (int i = 0; i < cases; ++i) {
        auto rng = case_rng(seed, tag, i);
        SignaturePtr sig = law_signature();
        auto part = random_trace_partition(rng, sig, 1);
        if (!part) {
            tight.fail();
            continue;
        }
        const TracePartition& t = *part;
        std::vector<TypeId> lt_all = t.diagram().left_types();
        std::vector<TypeId> rt_all = t.diagram().right_types();
        std::vector<TypeId> m_types(lt_all.begin(), lt_all.end() - t.feedback());
        std::vector<TypeId> n_types(rt_all.begin(), rt_all.end() - t.feedback());
        std::vector<TypeId> w_types(lt_all.end() - t.feedback(), lt_all.end());

        check(tight, [&] {
            Diagram pre = gen_between(rng, sig, random_type_list(rng, *sig, 0, 2), m_types);
            Diagram post = gen_with_left(rng, sig, n_types);
            Diagram whole = compose(compose(tensor(pre, identity(sig, w_types)), t.diagram()),
                                    tensor(post, identity(sig, w_types)));
            TracePartition tw(whole, t.feedback());
            if (!is_nonsignalling(tw)) return false;
            return equal(contract(tw), compose(compose(pre, contract(t)), post));
        });

        check(slide, [&] {
            // f : X (x) W' -> Y (x) W with independent feedback types, then
            // g : W -> W' slides around the loop.
            std::vector<TypeId> base = random_type_list(rng, *sig, 0, 2);
            TypeId w_in_t = rand_int(rng, 0, sig->type_count() - 1);
            std::vector<TypeId> lt = base;
            lt.push_back(w_in_t);
            DiagramOptions opts;
            opts.left_types = lt;
            Diagram d = random_diagram(rng, sig, opts);
            Hypergraph graph = d.graph();
            WireId w_in_wire = d.left().back();
            std::vector<char> reach(graph.wire_count(), 0);
            std::vector<WireId> stack{w_in_wire};
            reach[w_in_wire] = 1;
            while (!stack.empty()) {
                WireId v = stack.back();
                stack.pop_back();
                for (const auto& box : graph.boxes()) {
                    if (std::find(box.inputs.begin(), box.inputs.end(), v) == box.inputs.end())
                        continue;
                    for (WireId o : box.outputs)
                        if (!reach[o]) {
                            reach[o] = 1;
                            stack.push_back(o);
                        }
                }
            }
            std::vector<WireId> cands;
            for (WireId wv = 0; wv < graph.wire_count(); ++wv)
                if (!reach[wv]) cands.push_back(wv);
            if (cands.empty()) {
                // Fresh state wires are never reachable from the inputs.
                for (int bl = 0; bl < sig->box_count() && cands.empty(); ++bl) {
                    if (!sig->box_inputs(bl).empty() || sig->box_outputs(bl).empty()) continue;
                    std::vector<WireId> outs;
                    for (TypeId ot : sig->box_outputs(bl)) outs.push_back(graph.add_wire(ot));
                    graph.add_box(bl, {}, outs);
                    cands.push_back(outs.front());
                }
                if (cands.empty()) return false;
            }
            WireId w_out_wire = cands[rand_int(rng, 0, static_cast<int>(cands.size()) - 1)];
            std::vector<WireId> right = d.right();
            right.push_back(w_out_wire);
            Diagram fd = Diagram::validate(Cospan{graph, d.left(), right});
            TypeId w_out_t = graph.wire_type(w_out_wire);

            Diagram g = gen_between(rng, sig, {w_out_t}, {w_in_t});
            std::vector<TypeId> y_types = d.right_types();

            Diagram lhs_d = compose(fd, tensor(identity(sig, y_types), g));
            Diagram rhs_d = compose(tensor(identity(sig, base), g), fd);
            TracePartition lt_p(lhs_d, 1), rt_p(rhs_d, 1);
            if (!is_nonsignalling(lt_p) || !is_nonsignalling(rt_p)) return false;
            return equal(contract(lt_p), contract(rt_p));
        });

        check(vanish, [&] {
            Diagram f = random_diagram(rng, sig);
            return equal(contract(TracePartition(f, 0)), f);
        });

        check(assoc, [&] {
            auto t2 = random_trace_partition(rng, sig, 2);
            if (!t2) return false;
            Diagram both = contract(*t2);
            Diagram inner = contract(TracePartition(t2->diagram(), 1));
            TracePartition mid(inner, 1);
            if (!is_nonsignalling(mid)) return false;
            return equal(both, contract(mid));
        });

        check(super, [&] {
            Diagram g = random_diagram(rng, sig);
            TracePartition tw(tensor(g, t.diagram()), t.feedback());
            if (!is_nonsignalling(tw)) return false;
            return equal(contract(tw), tensor(g, contract(t)));
        });

        check(yank, [&] {
            std::vector<TypeId> wl = random_type_list(rng, *sig, 1, 2);
            TracePartition sw(swap_diagram(sig, wl, wl), static_cast<int>(wl.size()));
            if (!is_nonsignalling(sw)) return false;
            return equal(contract(sw), identity(sig, wl));
        });
    }
    return {tight.r, slide.r, vanish.r, assoc.r, super.r, yank.r};
}

LawResult normalization_confluence_law(std::uint64_t seed, int cases) {
    Acc acc("normalization confluence");
    const std::uint64_t tag = fnv1a("confluence");
    for (int i = 0; i < cases; ++i) {
        auto rng = case_rng(seed, tag, i);
        check(acc, [&] {
            SignaturePtr sig = (i % 2 == 0) ? law_signature() : random_signature(rng);
            DiagramOptions opts;
            opts.max_boxes = 4;
            Cospan c = random_cospan(rng, sig, opts);
            std::set<std::string> outcomes;
            // Exhaust every single-step elimination order.
            std::vector<Cospan> frontier{c};
            while (!frontier.empty()) {
                Cospan cur = std::move(frontier.back());
                frontier.pop_back();
                auto elim = eliminable_boxes(cur);
                if (elim.empty()) {
                    outcomes.insert(canonical_form(Diagram::validate(std::move(cur))));
                    continue;
                }
                for (BoxId b : elim) frontier.push_back(eliminate_box(cur, b));
            }
            if (outcomes.size() != 1) return false;
            return *outcomes.begin() == canonical_form(normalize(std::move(c)));
        });
    }
    return acc.r;
}

LawResult comb_roundtrip_law(std::uint64_t seed, int cases, double eps) {
    Acc acc("comb extension round-trip");
    const std::uint64_t tag = fnv1a("comb_roundtrip");
    for (int i = 0; i < cases; ++i) {
        auto rng = case_rng(seed, tag, i);
        measure(acc, eps, [&] {
            Factors a = random_factors(rng, 0, 1, 1, 3, "A");
            Factors ap = random_factors(rng, 0, 1, 1, 3, "A'");
            Factors b = random_factors(rng, 1, 1, 1, 3, "B");
            Factors bp = random_factors(rng, 1, 1, 1, 3, "B'");
            NsKernel ns = random_nonsignalling(rng, a, bp, ap, b, i % 3 == 0);
            Comb c = comb_from_nonsignalling(ns.f, static_cast<int>(bp.size()),
                                             static_cast<int>(b.size()));
            return max_abs_diff(extension(c), ns.f);
        });
    }
    return acc.r;
}

LawResult comb_insertion_law(std::uint64_t seed, int pairs, int contexts_each, double eps) {
    Acc acc("insertion respects extensional classes");
    const std::uint64_t tag = fnv1a("comb_insertion");
    for (int i = 0; i < pairs; ++i) {
        auto rng = case_rng(seed, tag, i);
        measure(acc, eps, [&] {
            Factors e = random_factors(rng, 1, 1, 1, 3, "E");
            Factors a = random_factors(rng, 0, 1, 1, 3, "A");
            Factors ap = random_factors(rng, 0, 1, 1, 3, "A'");
            Factors b = random_factors(rng, 1, 1, 1, 3, "B");
            Factors bp = random_factors(rng, 1, 1, 1, 3, "B'");
            Comb c1(random_kernel(rng, a, concat_factors(e, b)),
                    random_kernel(rng, concat_factors(e, bp), ap), static_cast<int>(e.size()));
            Comb c2 = comb_from_nonsignalling(extension(c1), static_cast<int>(bp.size()),
                                              static_cast<int>(b.size()));
            if (!ext_equiv(c1, c2)) return 1.0;
            double worst = 0.0;
            for (int k = 0; k < contexts_each; ++k) {
                Factors kk = random_factors(rng, 0, 1, 1, 3, "K");
                Factors kp = random_factors(rng, 0, 1, 1, 3, "K'");
                Kernel h = random_kernel(rng, concat_factors(b, kk), concat_factors(bp, kp));
                worst = std::max(worst, max_abs_diff(insert(c1, h), insert(c2, h)));
            }
            return worst;
        });
    }
    return acc.r;
}

LawResult comb_sliding_law(std::uint64_t seed, int cases, double eps) {
    Acc acc("optic sliding implies extensional");
    const std::uint64_t tag = fnv1a("comb_sliding");
    for (int i = 0; i < cases; ++i) {
        auto rng = case_rng(seed, tag, i);
        measure(acc, eps, [&] {
            Factors e = random_factors(rng, 1, 1, 1, 3, "E");
            Factors e2 = random_factors(rng, 1, 1, 1, 3, "E'");
            Factors a = random_factors(rng, 0, 1, 1, 3, "A");
            Factors ap = random_factors(rng, 0, 1, 1, 3, "A'");
            Factors b = random_factors(rng, 1, 1, 1, 3, "B");
            Factors bp = random_factors(rng, 1, 1, 1, 3, "B'");
            Kernel f = random_kernel(rng, a, concat_factors(e, b));
            Kernel s = random_kernel(rng, e, e2);
            Kernel g = random_kernel(rng, concat_factors(e2, bp), ap);
            Comb c1(compose(tensor(s, identity_kernel(b)), f), g, static_cast<int>(e2.size()));
            Comb c2(f, compose(g, tensor(s, identity_kernel(bp))), static_cast<int>(e.size()));
            return max_abs_diff(extension(c1), extension(c2));
        });
    }
    return acc.r;
}

LawResult interp_functoriality_law(std::uint64_t seed, int cases, double eps) {
    Acc acc("interpretation functoriality");
    const std::uint64_t tag = fnv1a("functoriality");
    for (int i = 0; i < cases; ++i) {
        auto rng = case_rng(seed, tag, i);
        measure(acc, eps, [&] {
            SignaturePtr sig = (i % 2 == 0) ? law_signature() : random_signature(rng);
            Model m = random_model(rng, sig, 3);
            Diagram f = random_diagram(rng, sig);
            Diagram g = gen_with_left(rng, sig, f.right_types());
            double worst = max_abs_diff(interpret(compose(f, g), m),
                                        compose(interpret(g, m), interpret(f, m)));
            Diagram h = random_diagram(rng, sig);
            worst = std::max(worst, max_abs_diff(interpret(tensor(f, h), m),
                                                 tensor(interpret(f, m), interpret(h, m))));
            std::vector<TypeId> L = random_type_list(rng, *sig, 1, 2);
            worst = std::max(worst, max_abs_diff(interpret(identity(sig, L), m),
                                                 identity_kernel(m.factors(L))));
            worst = std::max(worst, max_abs_diff(interpret(copy_diagram(sig, L), m),
                                                 copy_kernel(m.factors(L))));
            worst = std::max(worst, max_abs_diff(interpret(del_diagram(sig, L), m),
                                                 del_kernel(m.factors(L))));
            std::vector<TypeId> R = random_type_list(rng, *sig, 0, 2);
            worst = std::max(worst, max_abs_diff(interpret(swap_diagram(sig, L, R), m),
                                                 swap_kernel(m.factors(L), m.factors(R))));
            return worst;
        });
    }
    return acc.r;
}

LawResult trace_soundness_law(std::uint64_t seed, int cases, double eps) {
    Acc acc("trace soundness");
    const std::uint64_t tag = fnv1a("soundness");
    for (int i = 0; i < cases; ++i) {
        auto rng = case_rng(seed, tag, i);
        measure(acc, eps, [&] {
            SignaturePtr sig = (i % 2 == 0) ? law_signature() : random_signature(rng);
            int feedback = 1 + (i % 2);
            auto t = random_trace_partition(rng, sig, feedback);
            if (!t) {
                sig = law_signature();
                t = random_trace_partition(rng, sig, feedback);
            }
            if (!t) throw Error("no trace partition generated");
            Model m = random_model(rng, sig, 3);
            return check_trace_soundness(*t, m).residual;
        });
    }
    return acc.r;
}

LawReport run_law_suite(std::uint64_t seed, int cases) {
    LawReport rep;
    rep.seed = seed;
    auto add = [&](LawResult r) { rep.results.push_back(std::move(r)); };
    auto add_all = [&](std::vector<LawResult> rs) {
        for (auto& r : rs) add(std::move(r));
    };
    add_all(kernel_trace_axiom_laws(seed, cases, 1e-8));
    add(yanking_exact_law());
    add(mat_trace_scalar_law());
    add(diagonal_oracle_law(seed, cases, 1e-9));
    add(well_definedness_law(seed, std::max(1, cases / 2), 1e-12));
    add(atomicity_law(seed, cases));
    add(support_order_law(seed, std::max(1, cases / 2)));
    add(conditional_law(seed, cases, 1e-9));
    add(bayes_law(seed, cases, 1e-9));
    add_all(free_structure_laws(seed, cases));
    add_all(free_contraction_laws(seed, cases));
    add(normalization_confluence_law(seed, std::max(1, cases / 2)));
    add(comb_roundtrip_law(seed, cases, 1e-9));
    add(comb_insertion_law(seed, std::max(1, cases / 10), 10, 1e-8));
    add(comb_sliding_law(seed, cases, 1e-9));
    add(interp_functoriality_law(seed, std::max(1, cases / 2), 1e-9));
    add(trace_soundness_law(seed, std::max(1, cases / 2), 1e-8));
    return rep;
}

}  // namespace markov
