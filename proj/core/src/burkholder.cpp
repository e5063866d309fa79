#include "besselsharp/burkholder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace bsharp {

namespace {

// Partials of (x+y)^p g(arg) by the chain rule, with arg = (y-x)/(x+y)
// (reflected = false) or arg = (x-y)/(x+y) (reflected = true).
struct WPartials {
    double w, wx, wy, wxx, wxy, wyy;
};

WPartials w_partials(const SeriesSolution& series, double x, double y, bool reflected) {
    const double p = series.params.p;
    const double u = x + y;
    const double s = (reflected ? (x - y) : (y - x)) / u;
    const double g0 = series.eval(s, 0);
    const double g1 = series.eval(s, 1);
    const double g2 = series.eval(s, 2);

    const double up = std::pow(u, p);
    const double up1 = up / u;
    const double up2 = up1 / u;
    const double up3 = up2 / u;
    const double up4 = up3 / u;

    WPartials r;
    r.w = up * g0;
    if (!reflected) {
        // ds/dx = -2y/u^2, ds/dy = 2x/u^2
        r.wx = p * up1 * g0 - 2.0 * y * up2 * g1;
        r.wy = p * up1 * g0 + 2.0 * x * up2 * g1;
        r.wxx = p * (p - 1.0) * up2 * g0 - 4.0 * y * (p - 1.0) * up3 * g1 +
                4.0 * y * y * up4 * g2;
        r.wxy = p * (p - 1.0) * up2 * g0 + 2.0 * (p - 1.0) * (x - y) * up3 * g1 -
                4.0 * x * y * up4 * g2;
        r.wyy = p * (p - 1.0) * up2 * g0 + 4.0 * x * (p - 1.0) * up3 * g1 +
                4.0 * x * x * up4 * g2;
    } else {
        // ds/dx = 2y/u^2, ds/dy = -2x/u^2
        r.wx = p * up1 * g0 + 2.0 * y * up2 * g1;
        r.wy = p * up1 * g0 - 2.0 * x * up2 * g1;
        r.wxx = p * (p - 1.0) * up2 * g0 + 4.0 * y * (p - 1.0) * up3 * g1 +
                4.0 * y * y * up4 * g2;
        r.wxy = p * (p - 1.0) * up2 * g0 + 2.0 * (p - 1.0) * (y - x) * up3 * g1 -
                4.0 * x * y * up4 * g2;
        r.wyy = p * (p - 1.0) * up2 * g0 - 4.0 * x * (p - 1.0) * up3 * g1 +
                4.0 * x * x * up4 * g2;
    }
    return r;
}

void require_first_quadrant(double x, double y) {
    if (!(x > 0.0) || !(y >= 0.0) || !std::isfinite(x) || !std::isfinite(y))
        fail("invalid-params", "require x > 0 and y >= 0");
}

} // namespace

double eval_W(const SeriesSolution& series, double x, double y) {
    require_first_quadrant(x, y);
    const double u = x + y;
    return std::pow(u, series.params.p) * series.eval((y - x) / u, 0);
}

double generator_residual_W(const SeriesSolution& series, double x, double y) {
    require_first_quadrant(x, y);
    if (!(y > 0.0))
        fail("invalid-params", "generator residual requires y > 0");
    const double d = series.params.d;
    const WPartials w = w_partials(series, x, y, false);

    const double gen = (d - 1.0) / (2.0 * x) * w.wx + (d - 1.0) / (2.0 * y) * w.wy +
                       0.5 * (w.wxx - 2.0 * w.wxy + w.wyy);

    const double u = x + y;
    const double s = (y - x) / u;
    const double gscale = 1.0 + std::abs(series.eval(s, 0)) + std::abs(series.eval(s, 1)) +
                          std::abs(series.eval(s, 2));
    return gen / (std::pow(u, series.params.p - 2.0) * gscale);
}

double eval_V(const ConstantsBundle& bundle, double x, double y) {
    if (!(x >= 0.0) || !(y >= 0.0))
        fail("invalid-params", "require x >= 0 and y >= 0");
    if (!bundle.C_pd.has_value())
        fail("invalid-params", "no finite constant for these parameters");
    const double p = bundle.params.p;
    return std::pow(y, p) - std::pow(*bundle.C_pd, p) * std::pow(x, p);
}

BurkholderFamily::BurkholderFamily(ConstantsBundle bundle, SeriesSolution series)
    : bundle_(std::move(bundle)), series_(std::move(series)) {
    if (!bundle_.z0 || !bundle_.c || !bundle_.z1)
        fail("invalid-params", "family requires a supercritical bundle (z0, c, z1)");
    switch (bundle_.params.branch) {
        case Branch::p_less_1:
            boundary_s_ = *bundle_.z1;
            break;
        case Branch::p_greater_2:
            boundary_s_ = -*bundle_.z0;
            break;
        default:
            boundary_s_ = *bundle_.z0;
            break;
    }
    boundary_ratio_ = (1.0 + boundary_s_) / (1.0 - boundary_s_);
}

Region BurkholderFamily::region(double x, double y) const {
    const double s = (y - x) / (x + y);
    if (bundle_.params.branch == Branch::p_greater_2)
        return s >= boundary_s_ ? Region::inner : Region::outer;
    return s <= boundary_s_ ? Region::inner : Region::outer;
}

double BurkholderFamily::value(double x, double y) const {
    return eval(x, y).value;
}

PointEval BurkholderFamily::eval(double x, double y) const {
    require_first_quadrant(x, y);
    const Params& params = bundle_.params;
    const double p = params.p;
    const double C = *bundle_.C_pd;
    const double c = *bundle_.c;

    PointEval out;
    out.region = region(x, y);
    if (out.region == Region::outer) {
        const double Cp = std::pow(C, p);
        out.value = std::pow(y, p) - Cp * std::pow(x, p);
        out.ux = -p * Cp * std::pow(x, p - 1.0);
        out.uy = p * std::pow(y, p - 1.0);
        out.uxx = -p * (p - 1.0) * Cp * std::pow(x, p - 2.0);
        out.uyy = p * (p - 1.0) * std::pow(y, p - 2.0);
        out.uxy = 0.0;
        return out;
    }

    const bool reflected = params.branch == Branch::p_greater_2;
    const double factor = reflected ? -c * std::pow(C, p) : c;
    const WPartials w = w_partials(series_, x, y, reflected);
    out.value = factor * w.w;
    out.ux = factor * w.wx;
    out.uy = factor * w.wy;
    out.uxx = factor * w.wxx;
    out.uxy = factor * w.wxy;
    out.uyy = factor * w.wyy;
    return out;
}

std::vector<GridReport> certify_inequalities(const BurkholderFamily& family,
                                             int grid_n, double tol) {
    if (grid_n < 101)
        fail("invalid-params", "grid_n >= 101 required");

    const ConstantsBundle& bundle = family.bundle();
    const double d = bundle.params.d;
    const double sb = family.boundary_s();
    const double s_lo = -1.0 + 1e-4;
    const double s_hi = 0.999;

    struct Worst {
        double margin = std::numeric_limits<double>::infinity();
        double x = 0.0, y = 0.0, s = 0.0;
        Region region = Region::inner;
        void update(double m, double px, double py, double ps, Region r) {
            if (m < margin) {
                margin = m;
                x = px;
                y = py;
                s = ps;
                region = r;
            }
        }
    };
    Worst maj, part1, part15, part2, part3;

    for (int i = 0; i < grid_n; ++i) {
        const double s = s_lo + (s_hi - s_lo) * i / (grid_n - 1);
        if (std::abs(s - sb) < 1e-6)
            continue; // second partials jump across the splitting line
        const double x = 1.0 - s;
        const double y = 1.0 + s;
        const PointEval e = family.eval(x, y);
        const double scale = 1.0 + std::abs(e.value) + std::abs(x * e.ux) +
                             std::abs(y * e.uy) + x * x * std::abs(e.uxx) +
                             y * y * std::abs(e.uyy);
        const double V = eval_V(bundle, x, y);
        const double L = e.uxx + (d - 1.0) * e.ux / x;
        const double R = e.uyy + (d - 1.0) * e.uy / y;

        maj.update((e.value - V) / scale, x, y, s, e.region);
        part1.update(-(L + R - 2.0 * e.uxy) / scale, x, y, s, e.region);
        part15.update(-(L - R) / scale, x, y, s, e.region);
        part2.update(-e.uxy / scale, x, y, s, e.region);
        part3.update(std::min(-e.ux, e.uy) / scale, x, y, s, e.region);
    }

    auto make = [&](const char* id, const Worst& w) {
        GridReport r;
        r.check_id = id;
        r.p = bundle.params.p;
        r.d = bundle.params.d;
        r.grid_n = grid_n;
        r.tol = tol;
        r.worst_margin = w.margin;
        r.worst_x = w.x;
        r.worst_y = w.y;
        r.worst_s = w.s;
        r.worst_region = to_string(w.region);
        r.pass = w.margin >= -tol;
        return r;
    };

    std::vector<GridReport> out;
    out.push_back(make("maj", maj));
    out.push_back(make("part1", part1));
    out.push_back(make("part1.5", part15));
    out.push_back(make("part2", part2));
    out.push_back(make("part3", part3));
    return out;
}

GridReport certify_w_generator(const SeriesSolution& series, int grid_n, double tol,
                               double lo, double hi) {
    if (grid_n < 2 || !(lo > 0.0) || !(hi > lo))
        fail("invalid-params", "bad generator grid");

    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    double worst = -std::numeric_limits<double>::infinity();
    double wx = lo, wy = lo;
    for (int i = 0; i < grid_n; ++i) {
        const double x = std::exp(llo + (lhi - llo) * i / (grid_n - 1));
        for (int j = 0; j < grid_n; ++j) {
            const double y = std::exp(llo + (lhi - llo) * j / (grid_n - 1));
            const double r = std::abs(generator_residual_W(series, x, y));
            if (r > worst) {
                worst = r;
                wx = x;
                wy = y;
            }
        }
    }

    GridReport r;
    r.check_id = "finvar";
    r.p = series.params.p;
    r.d = series.params.d;
    r.grid_n = grid_n;
    r.tol = tol;
    r.worst_margin = tol - worst;
    r.worst_x = wx;
    r.worst_y = wy;
    r.worst_s = (wy - wx) / (wx + wy);
    r.pass = worst <= tol;
    return r;
}

} // namespace bsharp
