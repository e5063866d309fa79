#include "besselsharp/hardy.hpp"

#include <cmath>
#include <complex>
#include <functional>

#include "besselsharp/constants.hpp"

namespace bsharp {

namespace {

using AnalyticFn = std::function<std::complex<double>(std::complex<double>)>;

// Trapezoidal p-mean of |F| over the circle of radius r; for a periodic
// integrand this is the n-node rectangle rule and converges spectrally.
double circle_p_mean(const AnalyticFn& f, double p, double r, int n) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        const double theta = 6.283185307179586476925286766559 * j / n;
        const std::complex<double> z = std::polar(r, theta);
        acc += std::pow(std::abs(f(z)), p);
    }
    return acc / n;
}

double hp_norm(const AnalyticFn& f, double p, const std::vector<double>& radii, int n) {
    double best = 0.0;
    for (const double r : radii) best = std::max(best, circle_p_mean(f, p, r, n));
    return std::pow(best, 1.0 / p);
}

} // namespace

HpReport hp_demo(const std::string& pair_id, double p, std::vector<double> radii,
                 int n_quadrature, double lambda) {
    if (!(p > 0.0))
        fail("invalid-params", "p must be positive");
    if (n_quadrature < 16)
        fail("invalid-params", "n_quadrature >= 16 required");
    if (radii.empty())
        radii = {0.5, 0.9, 0.99, 0.999, 1.0};
    for (const double r : radii)
        if (!(r > 0.0 && r <= 1.0))
            fail("invalid-params", "radii must lie in (0, 1]");

    const AnalyticFn f1 = [](std::complex<double> z) { return z; };
    AnalyticFn f2;
    if (pair_id == "z2half") {
        f2 = [](std::complex<double> z) { return z * z / 2.0; };
    } else if (pair_id == "z3third") {
        f2 = [](std::complex<double> z) { return z * z * z / 3.0; };
    } else if (pair_id == "lambda") {
        if (!(std::abs(lambda) <= 1.0))
            fail("invalid-params", "|lambda| <= 1 required");
        f2 = [lambda](std::complex<double> z) { return lambda * z; };
    } else {
        fail("unknown-pair", "unknown pair id '" + pair_id +
                                 "' (catalog: z2half, z3third, lambda)");
    }

    const SolveResult sr = solve_constants(Params::make(p, 2.0));

    HpReport rep;
    rep.pair_id = pair_id;
    rep.p = p;
    rep.lambda = (pair_id == "lambda") ? lambda : 1.0;
    rep.n_quadrature = n_quadrature;
    rep.radii = radii;
    rep.c_p2 = *sr.bundle.C_pd;
    rep.norm_f1 = hp_norm(f1, p, radii, n_quadrature);
    rep.norm_f2 = hp_norm(f2, p, radii, n_quadrature);
    rep.ratio = rep.norm_f2 / rep.norm_f1;
    rep.pass = rep.norm_f2 <= rep.c_p2 * rep.norm_f1 * (1.0 + 1e-12) + 1e-15;
    return rep;
}

} // namespace bsharp
