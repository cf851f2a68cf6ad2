#include "markov/combs.hpp"

#include "markov/generators.hpp"

namespace markov {

Comb::Comb(Kernel f, Kernel g, int env) : first(std::move(f)), second(std::move(g)), env_factors(env) {
    if (env < 0 || env > static_cast<int>(first.cod().size()) ||
        env > static_cast<int>(second.dom().size()))
        throw Error("comb: environment factor count out of range");
    if (!same_card(take_factors(first.cod(), env), take_factors(second.dom(), env)))
        throw Error("comb: teeth disagree on the environment");
}

Kernel insert(const Comb& c, const Kernel& h, const Tolerances&) {
    Factors b = c.b(), bp = c.b_prime();
    int bn = static_cast<int>(b.size()), bpn = static_cast<int>(bp.size());
    if (static_cast<int>(h.dom().size()) < bn || !same_card(take_factors(h.dom(), bn), b))
        throw Error("insert: hole filling does not accept B");
    if (static_cast<int>(h.cod().size()) < bpn || !same_card(take_factors(h.cod(), bpn), bp))
        throw Error("insert: hole filling does not produce B'");
    Factors k = drop_factors(h.dom(), bn);
    Factors kp = drop_factors(h.cod(), bpn);
    Kernel stage1 = tensor(c.first, identity_kernel(k));           // A(x)K -> E(x)B(x)K
    Kernel stage2 = tensor(identity_kernel(c.env()), h);           // E(x)B(x)K -> E(x)B'(x)K'
    Kernel stage3 = tensor(c.second, identity_kernel(kp));         // E(x)B'(x)K' -> A'(x)K'
    return compose(stage3, compose(stage2, stage1));
}

Kernel extension(const Comb& c, const Tolerances& tol) {
    return insert(c, swap_kernel(c.b(), c.b_prime()), tol);
}

bool ext_equiv(const Comb& c1, const Comb& c2, const Tolerances& tol) {
    if (!same_card(c1.a(), c2.a()) || !same_card(c1.a_prime(), c2.a_prime()) ||
        !same_card(c1.b(), c2.b()) || !same_card(c1.b_prime(), c2.b_prime()))
        throw Error("ext_equiv: boundary mismatch");
    return kernels_equal(extension(c1, tol), extension(c2, tol), tol);
}

bool ctx_equiv(const Comb& c1, const Comb& c2, int context_budget, std::mt19937_64& rng,
               const Tolerances& tol) {
    bool by_extension = ext_equiv(c1, c2, tol);
    for (int i = 0; i < context_budget; ++i) {
        Factors k = random_factors(rng, 0, 1, 1, 3, "K");
        Factors kp = random_factors(rng, 0, 1, 1, 3, "K'");
        Kernel h = random_kernel(rng, concat_factors(c1.b(), k), concat_factors(c1.b_prime(), kp));
        bool agree = kernels_equal(insert(c1, h, tol), insert(c2, h, tol), tol);
        if (agree != by_extension)
            throw Error("ctx_equiv: sampled context disagrees with the extensional verdict");
    }
    return by_extension;
}

bool optic_equiv(const Comb& c1, const Comb& c2, const Tolerances& tol) {
    return ext_equiv(c1, c2, tol);
}

Comb comb_from_nonsignalling(const Kernel& f, int b_in_factors, int b_out_factors,
                             const Tolerances& tol) {
    auto f_s = is_nonsignalling_sem(f, b_in_factors, b_out_factors, tol);
    if (!f_s) throw SignallingError("comb_from_nonsignalling: kernel is signalling");
    auto dis = disintegrate(f, *f_s, b_in_factors, b_out_factors, tol);

    Factors a = f_s->dom(), b = f_s->cod();
    Factors bp = drop_factors(f.dom(), static_cast<int>(f.dom().size()) - b_in_factors);
    Factors ap = take_factors(f.cod(), static_cast<int>(f.cod().size()) - b_out_factors);
    std::int64_t as = total_card(a), bs = total_card(b), bps = total_card(bp), aps = total_card(ap);

    // First tooth A -> (A (x) B) (x) B: copy the input, sample B once and
    // output it on both the environment and the hole boundary.
    Factors first_cod = concat_factors(concat_factors(a, b), b);
    NonnegMatrix first = NonnegMatrix::zeros(a, first_cod);
    for (std::int64_t x = 0; x < as; ++x)
        for (std::int64_t w = 0; w < bs; ++w)
            first.set(x, (x * bs + w) * bs + w, f_s->at(x, w));

    // Second tooth (A (x) B) (x) B' -> A': the disintegration remainder with
    // its arguments rearranged from (B, A, B') to (A, B, B').
    NonnegMatrix second = NonnegMatrix::zeros(concat_factors(concat_factors(a, b), bp), ap);
    for (std::int64_t x = 0; x < as; ++x)
        for (std::int64_t w = 0; w < bs; ++w)
            for (std::int64_t v = 0; v < bps; ++v)
                for (std::int64_t y = 0; y < aps; ++y)
                    second.set((x * bs + w) * bps + v, y, dis.remainder.at((w * as + x) * bps + v, y));

    return Comb(Kernel(std::move(first), tol), Kernel(std::move(second), tol),
                static_cast<int>(a.size() + b.size()));
}

}  // namespace markov
