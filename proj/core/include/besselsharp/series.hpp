#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "besselsharp/params.hpp"

namespace bsharp {

// Power-series solution g(s) = sum a_n (1+s)^n of
//
//     (1 - s^2) g''(s) - 2(d-1) s g'(s) + p(d-1) g(s) = 0,
//
// normalized by a_0 = -1, i.e. g(-1) = -1. The coefficients obey
//
//     a_{n+1} = a_n * [n(n-1) + 2(d-1)n - p(d-1)] / [2(n+1)(n+d-1)],
//
// so |a_{n+1}/a_n| -> 1/2 and the series converges for 1+s < 2.
//
// Storage is the scaled sequence b_n = 2^n a_n and evaluation runs in
// w = (1+s)/2: the raw a_n decay like 2^-n and underflow near n ~ 1070,
// while certifying abscissae close to 1 takes far more terms than that.
// b_n grows only polynomially, so the scaled form covers the whole range.
//
// Evaluation is certified up to s_max_certified: the dropped tail on
// [-1, s_max_certified] is below tail_tol by a geometric bound on the
// coefficient ratios. Immutable after construction; safe to share across
// threads.
struct SeriesSolution {
    Params params;
    std::vector<double> scaled_coeffs; // b_0 .. b_N with b_n = 2^n a_n
    std::size_t n_terms = 0;           // == scaled_coeffs.size()
    // Set when a recursion numerator vanishes exactly: a_n = 0 for all
    // n > polynomial_degree and the solution is a polynomial.
    std::optional<std::size_t> polynomial_degree;
    double s_max_certified = 0.0;
    double tail_tol = 0.0;

    // Raw coefficient a_n (underflows gracefully for very large n).
    double coeff(std::size_t n) const {
        return std::ldexp(scaled_coeffs[n], -static_cast<int>(n));
    }

    // Horner evaluation from the highest stored term down.
    // deriv_order in {0, 1, 2}. g(-1) == -1 exactly at order 0.
    double eval(double s, int deriv_order = 0) const;

    // Scaled residual of the defining equation at s in (-1, s_max_certified]:
    // [(1-s^2)g'' - 2(d-1)s g' + p(d-1)g] / (1 + |g| + |g'| + |g''|).
    double ode_residual(double s) const;
};

struct SeriesBuildOptions {
    double tail_tol = 1e-15;
    double s_max = 0.95;
    std::size_t max_terms = 200000;
};

// Builds the coefficient sequence, choosing N so the tail bound holds at
// u_max = 1 + min(s_max, 1 - 1e-6). Exact termination (a numerator factor
// within 1e-14 * scale of zero) is recorded via polynomial_degree.
// Throws "series-budget-exceeded" when max_terms does not reach tail_tol.
SeriesSolution build_series(const Params& params, double tail_tol, double s_max,
                            std::size_t max_terms = 200000);

inline SeriesSolution build_series(const Params& params,
                                   const SeriesBuildOptions& opt = {}) {
    return build_series(params, opt.tail_tol, opt.s_max, opt.max_terms);
}

// Independent cross-check: integrates the equation as a first-order system
// with a classic fixed-step fourth-order scheme from s = -1 + 1e-4 (initial
// g, g' taken from the series) and returns g(s_end). steps >= 1000.
double rk4_crosscheck(const SeriesSolution& series, double s_end, int steps);

} // namespace bsharp
