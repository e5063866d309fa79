#include "besselsharp/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace bsharp {

namespace {

// v(s)/g(s) on [-1, z0); both factors are negative there.
double payoff_ratio(const SeriesSolution& series, double z0, double s) {
    return payoff_section(series.params, z0, s, 0) / series.eval(s, 0);
}

struct RatioMin {
    double c = 0.0;
    double argmin = 0.0;
    bool at_boundary = false;
};

// Variational constant for p < 1: infimum of v/g over [-1, z0), located on a
// 4001-point grid with golden-section refinement, compared against the
// boundary limit v'(z0)/g'(z0).
RatioMin minimize_payoff_ratio(const SeriesSolution& series, double z0) {
    const int n = 4001;
    const double lo = -1.0;
    const double step = (z0 - lo) / n;

    int best_i = 0;
    double best_r = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double s = lo + step * i;
        const double r = payoff_ratio(series, z0, s);
        if (r < best_r) {
            best_r = r;
            best_i = i;
        }
    }

    const double c_limit = payoff_section(series.params, z0, z0, 1) / series.eval(z0, 1);

    // Golden-section refinement inside the bracketing grid cells.
    double a = lo + step * std::max(0, best_i - 1);
    double b = lo + step * std::min(n - 1, best_i + 1);
    const double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = payoff_ratio(series, z0, x1);
    double f2 = payoff_ratio(series, z0, x2);
    while (b - a > 1e-12) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = payoff_ratio(series, z0, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = payoff_ratio(series, z0, x2);
        }
    }
    const double s_int = 0.5 * (a + b);
    const double c_int = payoff_ratio(series, z0, s_int);

    if (c_int < c_limit * (1.0 - 1e-12))
        return {c_int, s_int, false};
    return {c_limit, z0, true};
}

void append_report(std::vector<GridReport>& out, const SeriesSolution& series,
                   std::string id, int grid_n, double tol, double worst_margin,
                   double worst_s) {
    GridReport r;
    r.check_id = std::move(id);
    r.p = series.params.p;
    r.d = series.params.d;
    r.grid_n = grid_n;
    r.tol = tol;
    r.worst_margin = worst_margin;
    r.worst_s = worst_s;
    r.worst_x = 1.0 - worst_s;
    r.worst_y = 1.0 + worst_s;
    r.pass = worst_margin >= -tol;
    out.push_back(std::move(r));
}

} // namespace

std::optional<double> find_z0(const SeriesSolution& series) {
    const int n = 4096;
    const double lo = -1.0;
    const double hi = series.s_max_certified;

    double prev_s = lo;
    double prev_g = series.eval(lo, 0); // exactly -1
    double root_lo = 0.0, root_hi = 0.0;
    bool found = false;
    for (int i = 1; i <= n; ++i) {
        const double s = lo + (hi - lo) * i / n;
        const double gs = series.eval(s, 0);
        if (prev_g < 0.0 && gs >= 0.0) {
            root_lo = prev_s;
            root_hi = s;
            found = true;
            break;
        }
        prev_s = s;
        prev_g = gs;
    }

    if (!found) {
        if (series.params.supercritical)
            fail("root-beyond-range",
                 "p + d > 2 but no sign change of g in [-1, " + std::to_string(hi) +
                     "]; rebuild the series with a larger s_max");
        return std::nullopt;
    }
    if (!series.params.supercritical)
        fail("internal-inconsistency", "sign change of g although p + d <= 2");

    while (root_hi - root_lo > 1e-14) {
        const double mid = 0.5 * (root_lo + root_hi);
        if (series.eval(mid, 0) < 0.0)
            root_lo = mid;
        else
            root_hi = mid;
    }
    const double z0 = 0.5 * (root_lo + root_hi);
    if (!(series.eval(z0, 1) > 0.0))
        fail("internal-inconsistency", "g'(z0) <= 0 at the located root");
    return z0;
}

double compute_C(const Params& params, double z0) {
    if (!(z0 > -1.0 && z0 < 1.0))
        fail("invalid-params", "z0 must lie in (-1, 1)");
    if (params.branch == Branch::p_greater_2)
        return (1.0 - z0) / (1.0 + z0);
    return (1.0 + z0) / (1.0 - z0);
}

double payoff_section(const Params& params, double z0, double s, int deriv_order) {
    const double p = params.p;
    const double Kp = std::pow((1.0 + z0) / (1.0 - z0), p);
    const double A = (1.0 + s) / 2.0;
    const double B = (1.0 - s) / 2.0;
    switch (deriv_order) {
        case 0:
            return std::pow(A, p) - Kp * std::pow(B, p);
        case 1:
            return 0.5 * p * (std::pow(A, p - 1.0) + Kp * std::pow(B, p - 1.0));
        case 2:
            return 0.25 * p * (p - 1.0) * (std::pow(A, p - 2.0) - Kp * std::pow(B, p - 2.0));
        default:
            fail("invalid-params", "deriv_order must be 0, 1 or 2");
    }
}

double compute_c(const SeriesSolution& series, double z0) {
    const double p = series.params.p;
    const double gp = series.eval(z0, 1);
    if (!(gp > 0.0) || !std::isfinite(gp))
        fail("internal-inconsistency", "g'(z0) not positive");
    if (p >= 1.0)
        return 2.0 * p * std::pow(1.0 + z0, p - 1.0) /
               (std::pow(2.0, p) * gp * (1.0 - z0));
    const RatioMin m = minimize_payoff_ratio(series, z0);
    if (!std::isfinite(m.c) || !(m.c > 0.0))
        fail("internal-inconsistency", "variational constant not positive/finite");
    return m.c;
}

std::optional<double> compute_s1(const Params& params, double z0) {
    if (params.branch == Branch::p_equal_2)
        return std::nullopt;
    const double K = (1.0 + z0) / (1.0 - z0);
    const double t = std::pow(K, params.p / (params.p - 2.0));
    return (t - 1.0) / (t + 1.0);
}

double compute_z1(const SeriesSolution& series, double z0, double c) {
    const Params& params = series.params;
    if (params.p >= 1.0)
        return z0;

    const RatioMin m = minimize_payoff_ratio(series, z0);
    const double z1 = m.at_boundary ? z0 : m.argmin;

    const double g0 = series.eval(z1, 0);
    const double g1 = series.eval(z1, 1);
    const double v0 = payoff_section(params, z0, z1, 0);
    const double v1 = payoff_section(params, z0, z1, 1);
    const double scale =
        1.0 + std::abs(v0) + std::abs(c * g0) + std::abs(v1) + std::abs(c * g1);
    if (std::abs(c * g0 - v0) > 1e-10 * scale || std::abs(c * g1 - v1) > 1e-8 * scale)
        fail("z1-not-found",
             "tangency conditions violated at z1=" + std::to_string(z1) +
                 ": |cg-v|=" + std::to_string(std::abs(c * g0 - v0)) +
                 " |cg'-v'|=" + std::to_string(std::abs(c * g1 - v1)));

    // v'' >= 0 on [z1, 1): checked on a grid up to 0.99.
    const int n = 101;
    const double hi = 0.99;
    for (int i = 0; i < n; ++i) {
        const double s = z1 + (hi - z1) * i / (n - 1);
        const double v2 = payoff_section(params, z0, s, 2);
        if (v2 < -1e-12 * (1.0 + std::abs(v2)))
            fail("z1-not-found", "v'' negative at s=" + std::to_string(s) +
                                     " beyond the tangency point");
    }
    return z1;
}

SolveResult solve_constants(const Params& params, const SolveOptions& opt) {
    SolveResult out;
    out.bundle.params = params;

    if (!params.supercritical) {
        out.series = build_series(params, opt.tail_tol, 0.9, opt.max_terms);
        if (find_z0(out.series).has_value())
            fail("internal-inconsistency", "unexpected root for p + d <= 2");
        out.bundle.status = "no-finite-constant";
        return out;
    }

    std::optional<double> z0;
    bool have = false;
    for (const double s_max : {0.95, 0.99, 0.999, 0.9995}) {
        out.series = build_series(params, opt.tail_tol, s_max, opt.max_terms);
        try {
            z0 = find_z0(out.series);
            have = true;
            break;
        } catch (const Error& e) {
            if (e.id() != std::string("root-beyond-range")) throw;
        }
    }
    if (!have) {
        // Near-critical rung: relaxed tolerance, larger budget.
        out.series = build_series(params, 1e-12, 0.99995, 2000000);
        z0 = find_z0(out.series); // root-beyond-range propagates if still missing
    }

    out.bundle.z0 = *z0;
    out.bundle.C_pd = compute_C(params, *z0);
    out.bundle.gprime_z0 = out.series.eval(*z0, 1);
    out.bundle.c = compute_c(out.series, *z0);
    out.bundle.s1 = compute_s1(params, *z0);
    out.bundle.z1 = compute_z1(out.series, *z0, *out.bundle.c);
    out.bundle.status = (*z0 > 1.0 - 1e-4) ? "near-critical" : "ok";
    return out;
}

std::vector<GridReport> verify_g_properties(const SeriesSolution& series,
                                            const ConstantsBundle& bundle,
                                            int grid_n, double tol) {
    if (!bundle.z0.has_value())
        fail("invalid-params", "verify_g_properties requires a supercritical bundle");
    if (grid_n < 101)
        fail("invalid-params", "grid_n >= 101 required");

    const Params& params = series.params;
    const double p = params.p;
    const double d = params.d;
    const double z0 = *bundle.z0;
    const double c = *bundle.c;
    const double z1 = *bundle.z1;

    std::vector<GridReport> reports;

    // Worst margins over the grid (-1 + 1e-6, z0].
    const double lo = -1.0 + 1e-6;
    double worst_lem1i = std::numeric_limits<double>::infinity(), s_lem1i = lo;
    double worst_lem1ii = std::numeric_limits<double>::infinity(), s_lem1ii = lo;
    double worst_d1 = std::numeric_limits<double>::infinity(), s_d1 = lo;
    double worst_d2 = std::numeric_limits<double>::infinity(), s_d2 = lo;
    double worst_d3 = std::numeric_limits<double>::infinity(), s_d3 = lo;
    double worst_d4 = std::numeric_limits<double>::infinity(), s_d4 = lo;

    for (int i = 0; i < grid_n; ++i) {
        const double s = lo + (z0 - lo) * i / (grid_n - 1);
        const double g0 = series.eval(s, 0);
        const double g1 = series.eval(s, 1);
        const double g2 = series.eval(s, 2);
        const double scale = 1.0 + std::abs(g0) + std::abs(g1) + std::abs(g2);

        const double m1 = g1 / scale;
        if (m1 < worst_lem1i) { worst_lem1i = m1; s_lem1i = s; }

        const double m2 = (2.0 - p) * g2 / scale;
        if (m2 < worst_lem1ii) { worst_lem1ii = m2; s_lem1ii = s; }

        const double lhs1 = (2.0 - p) * (1.0 - s * s) * g2 -
                            2.0 * (p - 1.0) * (p - 2.0) * s * g1 +
                            p * (p - 1.0) * (p - 2.0) * g0;
        const double m3 = lhs1 / scale;
        if (m3 < worst_d1) { worst_d1 = m3; s_d1 = s; }

        const double lhs2 = s * (1.0 - s * s) * g2 -
                            (p + d - 2.0 + (d - p) * s * s) * g1 +
                            p * (d - 1.0) * s * g0;
        const double m4 = -lhs2 / scale;
        if (m4 < worst_d2) { worst_d2 = m4; s_d2 = s; }

        if (p <= 2.0) {
            const double m5 = (p * g0 + (1.0 - s) * g1) / scale;
            if (m5 < worst_d3) { worst_d3 = m5; s_d3 = s; }
        }
        if (p >= 2.0) {
            const double m6 = -(p * g0 - (1.0 + s) * g1) / scale;
            if (m6 < worst_d4) { worst_d4 = m6; s_d4 = s; }
        }
    }

    // lem1-i is strict positivity of g'; tol 0 by construction.
    append_report(reports, series, "lem1-i", grid_n, 0.0, worst_lem1i, s_lem1i);
    append_report(reports, series, "lem1-ii", grid_n, tol, worst_lem1ii, s_lem1ii);

    // lem1-iii: sign pattern of z0 against p.
    {
        double margin;
        if (params.branch == Branch::p_equal_2)
            margin = 1e-12 - std::abs(z0);
        else
            margin = (p < 2.0 ? z0 : -z0);
        append_report(reports, series, "lem1-iii", 1, 0.0, margin, z0);
    }

    append_report(reports, series, "diffin1", grid_n, tol, worst_d1, s_d1);
    append_report(reports, series, "diffin2", grid_n, tol, worst_d2, s_d2);
    if (p <= 2.0)
        append_report(reports, series, "diffin3", grid_n, tol, worst_d3, s_d3);
    if (p >= 2.0)
        append_report(reports, series, "diffin4", grid_n, tol, worst_d4, s_d4);

    // Majorization of the payoff section by c*g on [-1, z0], direction by branch.
    {
        double worst = std::numeric_limits<double>::infinity();
        double worst_s = -1.0;
        for (int i = 0; i < grid_n; ++i) {
            const double s = -1.0 + (z0 + 1.0) * i / (grid_n - 1);
            const double cg = c * series.eval(s, 0);
            const double v = payoff_section(params, z0, s, 0);
            const double scale = 1.0 + std::abs(cg) + std::abs(v);
            double m;
            if (p < 2.0)
                m = (cg - v) / scale; // cg >= v
            else if (p > 2.0)
                m = (v - cg) / scale; // cg <= v
            else
                m = -std::abs(cg - v) / scale; // equality at p = 2
            if (m < worst) { worst = m; worst_s = s; }
        }
        append_report(reports, series, "majorization", grid_n, tol, worst, worst_s);
    }

    // Tangency at z1: c g = v and c g' = v'.
    {
        const double g0 = series.eval(z1, 0);
        const double g1 = series.eval(z1, 1);
        const double v0 = payoff_section(params, z0, z1, 0);
        const double v1 = payoff_section(params, z0, z1, 1);
        const double scale =
            1.0 + std::abs(v0) + std::abs(c * g0) + std::abs(v1) + std::abs(c * g1);
        const double margin = std::min(1e-10 - std::abs(c * g0 - v0) / scale,
                                       1e-8 - std::abs(c * g1 - v1) / scale);
        append_report(reports, series, "z1-match", 1, 0.0, margin, z1);
    }

    // d = 2: the equation is invariant under s -> -s, so the reflected
    // function solves it with the same p.
    if (d == 2.0) {
        double worst = std::numeric_limits<double>::infinity();
        double worst_s = 0.0;
        const double hi = std::min(0.9, series.s_max_certified);
        for (int i = 0; i < grid_n; ++i) {
            const double s = -hi + 2.0 * hi * i / (grid_n - 1);
            const double g0 = series.eval(-s, 0);
            const double g1 = series.eval(-s, 1);
            const double g2 = series.eval(-s, 2);
            const double res = (1.0 - s * s) * g2 + 2.0 * (d - 1.0) * s * g1 +
                               p * (d - 1.0) * g0;
            const double scale = 1.0 + std::abs(g0) + std::abs(g1) + std::abs(g2);
            const double m = 1e-8 - std::abs(res) / scale;
            if (m < worst) { worst = m; worst_s = s; }
        }
        append_report(reports, series, "reflect-d2", grid_n, 0.0, worst, worst_s);
    }

    return reports;
}

} // namespace bsharp
