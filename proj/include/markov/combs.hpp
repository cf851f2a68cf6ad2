#pragma once

#include <random>

#include "markov/stoch.hpp"

namespace markov {

/// A second-order process with a hole: an environment E and two teeth
/// f : A -> E (x) B (first), g : E (x) B' -> A' (second). `env_factors`
/// says how many leading factors of f's cod / g's dom form E.
struct Comb {
    Kernel first;
    Kernel second;
    int env_factors;

    Comb(Kernel f, Kernel g, int env);

    Factors a() const { return first.dom(); }
    Factors env() const { return take_factors(first.cod(), env_factors); }
    Factors b() const { return drop_factors(first.cod(), env_factors); }
    Factors b_prime() const { return drop_factors(second.dom(), env_factors); }
    Factors a_prime() const { return second.cod(); }
};

/// Comb insertion C[h] = (f (x) id_K) ; (id_E (x) h) ; (g (x) id_K') for a
/// hole-filling h : B (x) K -> B' (x) K'.
Kernel insert(const Comb& c, const Kernel& h, const Tolerances& tol = {});

/// The joint morphism C[swap_{B,B'}] : A (x) B' -> A' (x) B. Always
/// non-signalling from B' to B.
Kernel extension(const Comb& c, const Tolerances& tol = {});

/// Extensional equivalence: equality of extensions.
bool ext_equiv(const Comb& c1, const Comb& c2, const Tolerances& tol = {});

/// Contextual equivalence. Decided via the extension (the two notions
/// coincide over this backend); additionally audits `context_budget`
/// random hole fillings and reports a defect if any insertion pair
/// disagrees.
bool ctx_equiv(const Comb& c1, const Comb& c2, int context_budget, std::mt19937_64& rng,
               const Tolerances& tol = {});

/// Optic equivalence, decided by reduction to extensional equivalence
/// (valid over this backend, which has universal dilations).
bool optic_equiv(const Comb& c1, const Comb& c2, const Tolerances& tol = {});

/// Canonical comb presentation of a non-signalling f : A (x) B' -> A' (x) B
/// (trailing factor counts given): environment E = A (x) B, first tooth
/// copies A and samples B from the marginal, second tooth is the
/// disintegration remainder. Its extension reproduces f.
Comb comb_from_nonsignalling(const Kernel& f, int b_in_factors, int b_out_factors,
                             const Tolerances& tol = {});

}  // namespace markov
