#include "besselsharp/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bsharp {

namespace {

// Decreasing majorant of the raw coefficient ratio |a_{m+1}/a_m| for m >= 1:
//   |ratio(m)| <= 1/2 + (max(0, d-3) m + p(d-1)) / (2 m (m+d)).
double ratio_envelope(const Params& params, double m) {
    const double num = std::max(0.0, params.d - 3.0) * m + params.p * (params.d - 1.0);
    return 0.5 + num / (2.0 * m * (m + params.d));
}

constexpr double kLog15 = 0.4054651081081644; // log(1.5)

} // namespace

SeriesSolution build_series(const Params& params, double tail_tol, double s_max,
                            std::size_t max_terms) {
    if (!(tail_tol > 0.0))
        fail("invalid-params", "tail_tol must be positive");
    if (!(s_max > -1.0 && s_max < 1.0))
        fail("invalid-params", "s_max must lie in (-1, 1)");
    if (max_terms < 8)
        fail("invalid-params", "max_terms too small");

    const double p = params.p;
    const double d = params.d;
    const double s_cert = std::min(s_max, 1.0 - 1e-6);
    const double w_max = (1.0 + s_cert) / 2.0;

    SeriesSolution out;
    out.params = params;
    out.tail_tol = tail_tol;
    out.s_max_certified = s_cert;

    std::vector<double>& b = out.scaled_coeffs;
    b.reserve(1024);
    b.push_back(-1.0);

    for (std::size_t k = 0;; ++k) {
        const double kk = static_cast<double>(k);
        const double num = kk * (kk - 1.0) + 2.0 * (d - 1.0) * kk - p * (d - 1.0);
        const double num_scale =
            std::abs(kk * (kk - 1.0)) + 2.0 * (d - 1.0) * kk + p * (d - 1.0);
        if (std::abs(num) < 1e-14 * num_scale) {
            // a_{k+1} = 0 exactly: polynomial solution of degree k.
            out.polynomial_degree = k;
            b.push_back(0.0);
            b.push_back(0.0);
            break;
        }
        // b_{n+1}/b_n = 2 a_{n+1}/a_n
        const double ratio = num / ((kk + 1.0) * (kk + d - 1.0));
        const double next = b.back() * ratio;
        b.push_back(next);

        const std::size_t n = b.size() - 1; // index of the term just stored
        if (n >= 64 && std::abs(next) > 1.0 &&
            std::log(std::abs(next)) > static_cast<double>(n) * kLog15)
            fail("internal-inconsistency",
                 "coefficient envelope |a_n| <= 0.75^n violated at n=" + std::to_string(n));

        if (n >= 8) {
            const double r = ratio_envelope(params, static_cast<double>(n));
            const double q = 2.0 * r * w_max;
            if (r < 0.55 && q < 1.0) {
                const double tail =
                    std::abs(next) * std::pow(w_max, static_cast<double>(n)) * q / (1.0 - q);
                if (tail < tail_tol) break;
            }
        }
        if (b.size() >= max_terms)
            fail("series-budget-exceeded",
                 "series for p=" + std::to_string(p) + " d=" + std::to_string(d) +
                     " did not reach tail_tol=" + std::to_string(tail_tol) +
                     " at s_max=" + std::to_string(s_cert) + " within " +
                     std::to_string(max_terms) + " terms");
    }

    out.n_terms = b.size();
    return out;
}

double SeriesSolution::eval(double s, int deriv_order) const {
    // A few ulp of slack: grids of the form lo + (cert - lo) * i / n may land
    // one rounding step past the certified endpoint.
    const double slack = 8.0 * 2.220446049250313e-16 * (1.0 + std::abs(s_max_certified));
    if (!(s >= -1.0 && s <= s_max_certified + slack))
        fail("range", "s=" + std::to_string(s) + " outside certified range [-1, " +
                          std::to_string(s_max_certified) + "]");
    const double w = (1.0 + s) / 2.0;
    const std::vector<double>& b = scaled_coeffs;
    const std::size_t n = b.size() - 1;
    switch (deriv_order) {
        case 0: {
            double acc = b[n];
            for (std::size_t i = n; i-- > 0;) acc = acc * w + b[i];
            return acc;
        }
        case 1: {
            // g'(s) = (1/2) sum n b_n w^{n-1}
            double acc = static_cast<double>(n) * b[n];
            for (std::size_t i = n; i-- > 1;) acc = acc * w + static_cast<double>(i) * b[i];
            return 0.5 * acc;
        }
        case 2: {
            // g''(s) = (1/4) sum n(n-1) b_n w^{n-2}
            double acc = static_cast<double>(n) * static_cast<double>(n - 1) * b[n];
            for (std::size_t i = n; i-- > 2;)
                acc = acc * w + static_cast<double>(i) * static_cast<double>(i - 1) * b[i];
            return 0.25 * acc;
        }
        default:
            fail("invalid-params", "deriv_order must be 0, 1 or 2");
    }
}

double SeriesSolution::ode_residual(double s) const {
    if (!(s > -1.0))
        fail("range", "ode_residual requires s > -1");
    const double g0 = eval(s, 0);
    const double g1 = eval(s, 1);
    const double g2 = eval(s, 2);
    const double r = (1.0 - s * s) * g2 - 2.0 * (params.d - 1.0) * s * g1 +
                     params.p * (params.d - 1.0) * g0;
    return r / (1.0 + std::abs(g0) + std::abs(g1) + std::abs(g2));
}

double rk4_crosscheck(const SeriesSolution& series, double s_end, int steps) {
    const double delta0 = 1e-4;
    const double s0 = -1.0 + delta0;
    if (!(s_end > s0 && s_end < 1.0))
        fail("range", "s_end must lie in (-1 + 1e-4, 1)");
    if (steps < 1000)
        fail("invalid-params", "steps >= 1000 required");

    const double p = series.params.p;
    const double d = series.params.d;
    const double h = (s_end - s0) / steps;
    if (!(std::abs(h) > 0.0))
        fail("integration-diverged", "step underflow");

    auto rhs = [p, d](double s, double y0, double y1, double& f0, double& f1) {
        f0 = y1;
        f1 = (2.0 * (d - 1.0) * s * y1 - p * (d - 1.0) * y0) / (1.0 - s * s);
    };

    double y0 = series.eval(s0, 0);
    double y1 = series.eval(s0, 1);
    double s = s0;
    for (int i = 0; i < steps; ++i) {
        double k10, k11, k20, k21, k30, k31, k40, k41;
        rhs(s, y0, y1, k10, k11);
        rhs(s + 0.5 * h, y0 + 0.5 * h * k10, y1 + 0.5 * h * k11, k20, k21);
        rhs(s + 0.5 * h, y0 + 0.5 * h * k20, y1 + 0.5 * h * k21, k30, k31);
        rhs(s + h, y0 + h * k30, y1 + h * k31, k40, k41);
        y0 += h / 6.0 * (k10 + 2.0 * k20 + 2.0 * k30 + k40);
        y1 += h / 6.0 * (k11 + 2.0 * k21 + 2.0 * k31 + k41);
        s = s0 + (i + 1) * h;
        if (!std::isfinite(y0) || !std::isfinite(y1))
            fail("integration-diverged", "non-finite state at s=" + std::to_string(s));
    }
    return y0;
}

} // namespace bsharp
