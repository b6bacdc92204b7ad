#pragma once

// Numerical kernels shared by every sum over the mode bank: a fixed-order
// pairwise reduction, extended-precision phase reduction, and a deterministic
// parallel loop.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace dtpt {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Pairwise (cascade) summation with a fixed split point.  The reduction tree
/// depends only on the length, so results are bit-identical regardless of how
/// callers schedule work across threads.
inline double pairwise_sum(std::span<const double> values) {
    constexpr std::size_t leaf = 32;
    if (values.size() <= leaf) {
        // Four interleaved partial sums: a fixed order, but no single
        // dependency chain through every addition.
        double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
        std::size_t i = 0;
        for (; i + 4 <= values.size(); i += 4) {
            a0 += values[i];
            a1 += values[i + 1];
            a2 += values[i + 2];
            a3 += values[i + 3];
        }
        for (; i < values.size(); ++i) a0 += values[i];
        return (a0 + a1) + (a2 + a3);
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace detail {
// 2*pi = c1 + c2 + c3; c1 and c2 carry 30 significant bits so n*c1 and n*c2
// are exact for |n| < 2^23.
inline constexpr double two_pi_c1 = 6.283185310661793;
inline constexpr double two_pi_c2 = -3.4822062768002926e-09;
inline constexpr double two_pi_c3 = -1.401373759235972e-18;
}  // namespace detail

/// omega*t reduced to [-pi, pi].  The product is formed exactly (two-product
/// via fma) and 2*pi is subtracted in three pieces, so the absolute error stays
/// near one ulp of pi even for arguments of order 1e7.
inline double reduce_phase(double omega, double t) {
    const double p = omega * t;
    const double p_err = std::fma(omega, t, -p);
    const double n = std::nearbyint(p / two_pi);
    double r = std::fma(-n, detail::two_pi_c1, p);
    r = std::fma(-n, detail::two_pi_c2, r);
    r = std::fma(-n, detail::two_pi_c3, r);
    return r + p_err;
}

struct SinCos {
    double sin;
    double cos;
};

inline SinCos sincos_phase(double omega, double t) {
    const double r = reduce_phase(omega, t);
    return {std::sin(r), std::cos(r)};
}

/// Worker count: explicit value if positive, else DTPT_THREADS, else 1.
inline unsigned resolve_threads(int requested) {
    if (requested > 0) return static_cast<unsigned>(requested);
    if (const char* env = std::getenv("DTPT_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 1;
}

/// Runs body(i) for i in [0, n).  Each index is processed by exactly one
/// worker and writes only its own output slot, so results do not depend on the
/// worker count.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    }
}

/// Uniform grid t_i = unit * (start + i * step), i = 0..count-1.  Expressing
/// points as unit * (exact multiple) keeps t = n * unit reproducible on grids
/// whose step is a dyadic fraction.
inline std::vector<double> uniform_grid(double unit, double start, double step, std::size_t count) {
    std::vector<double> t(count);
    for (std::size_t i = 0; i < count; ++i) t[i] = unit * (start + static_cast<double>(i) * step);
    return t;
}

}  // namespace dtpt
