#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace conelaw::cf {

// Denominator cap: beyond ~1e8 the convergents of a double-precision input
// track the floating representation, not the intended real number. The cap
// also keeps every product in the determinant identity exact in 64 bits.
inline constexpr std::int64_t kMaxDenominator = 100'000'000;

struct Convergent {
    int k = 0;          // position in the expansion, 0-based
    std::int64_t p = 0;
    std::int64_t q = 1;  // always > 0, gcd(p, q) = 1 by the recurrence
    double value = 0.0;  // p / q
};

// Standard continued-fraction convergents of lambda via the recurrence
// p_k = a_k p_{k-1} + p_{k-2}, q_k = a_k q_{k-1} + q_{k-2}. Stops at k_max,
// at exact termination, or when q would exceed kMaxDenominator.
inline std::vector<Convergent> convergents(double lambda, int k_max) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("lambda must be positive and finite");
    if (lambda >= 1e15)
        throw std::invalid_argument("lambda too large for exact integer convergents");
    if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");

    std::vector<Convergent> out;
    std::int64_t p_prev2 = 0, q_prev2 = 1;  // p_{-2}/q_{-2} = 0/1
    std::int64_t p_prev1 = 1, q_prev1 = 0;  // p_{-1}/q_{-1} = 1/0
    double x = lambda;
    for (int k = 0; k < k_max; ++k) {
        const double a_real = std::floor(x);
        if (a_real >= 9e15) break;  // precision exhausted
        const std::int64_t a = static_cast<std::int64_t>(a_real);
        const __int128 p_wide = static_cast<__int128>(a) * p_prev1 + p_prev2;
        const __int128 q_wide = static_cast<__int128>(a) * q_prev1 + q_prev2;
        if (q_wide > kMaxDenominator) break;
        const std::int64_t p = static_cast<std::int64_t>(p_wide);
        const std::int64_t q = static_cast<std::int64_t>(q_wide);
        out.push_back({k, p, q, static_cast<double>(p) / static_cast<double>(q)});
        p_prev2 = p_prev1; p_prev1 = p;
        q_prev2 = q_prev1; q_prev1 = q;
        const double rem = x - a_real;
        if (rem == 0.0) break;  // exact rational, expansion terminates
        x = 1.0 / rem;
    }
    return out;
}

// p_k q_{k-1} - p_{k-1} q_k, exact; equals (-1)^(k-1) for consecutive pairs.
inline std::int64_t determinant(const Convergent& curr, const Convergent& prev) {
    const __int128 d = static_cast<__int128>(curr.p) * prev.q -
                       static_cast<__int128>(prev.p) * curr.q;
    return static_cast<std::int64_t>(d);
}

}  // namespace conelaw::cf
