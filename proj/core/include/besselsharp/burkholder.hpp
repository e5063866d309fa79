#pragma once

#include <vector>

#include "besselsharp/constants.hpp"
#include "besselsharp/report.hpp"
#include "besselsharp/series.hpp"

namespace bsharp {

enum class Region { inner, outer };

inline const char* to_string(Region r) {
    return r == Region::inner ? "inner" : "outer";
}

// U with its gradient and second partials at one point.
struct PointEval {
    Region region = Region::inner;
    double value = 0.0;
    double ux = 0.0, uy = 0.0;
    double uxx = 0.0, uxy = 0.0, uyy = 0.0;
};

// W(x,y) = (x+y)^p g((y-x)/(x+y)) for x > 0, y >= 0.
double eval_W(const SeriesSolution& series, double x, double y);

// Scaled residual of the drift identity
//   (d-1)/(2x) W_x + (d-1)/(2y) W_y + (W_xx - 2 W_xy + W_yy)/2 = 0,
// assembled from chain-rule partials and divided by
// (x+y)^{p-2} (1 + |g| + |g'| + |g''|).
double generator_residual_W(const SeriesSolution& series, double x, double y);

// V(x,y) = y^p - C_pd^p x^p for x, y >= 0.
double eval_V(const ConstantsBundle& bundle, double x, double y);

// The piecewise majorant U: a multiple of W on the g-side of the splitting
// line through the origin, V on the other side. The line sits at slope
// boundary_ratio = (1+z1)/(1-z1) for p < 1, (1+z0)/(1-z0) for 1 <= p <= 2 and
// (1-z0)/(1+z0) for p > 2; for p > 2 the g-branch argument is reflected,
// U = -c C^p (x+y)^p g((x-y)/(x+y)) above the line.
//
// Degree-p positively homogeneous and C^1 across the line by the choice of c.
class BurkholderFamily {
public:
    BurkholderFamily(ConstantsBundle bundle, SeriesSolution series);

    const ConstantsBundle& bundle() const { return bundle_; }
    const SeriesSolution& series() const { return series_; }
    double boundary_ratio() const { return boundary_ratio_; }
    // Position of the splitting line in the coordinate s = (y-x)/(x+y).
    double boundary_s() const { return boundary_s_; }

    Region region(double x, double y) const;
    double value(double x, double y) const;
    PointEval eval(double x, double y) const;

private:
    ConstantsBundle bundle_;
    SeriesSolution series_;
    double boundary_s_ = 0.0;
    double boundary_ratio_ = 0.0;
};

// Certifies U >= V, L + R - 2 U_xy <= 0, L - R <= 0, U_xy <= 0, U_x <= 0 and
// U_y >= 0 (with L = U_xx + (d-1)U_x/x, R = U_yy + (d-1)U_y/y) on the section
// x + y = 2 parameterized by s in [-1 + 1e-4, 0.999], skipping a 1e-6 band
// around the splitting line where second partials jump. grid_n >= 101.
// Check ids: "maj", "part1", "part1.5", "part2", "part3".
std::vector<GridReport> certify_inequalities(const BurkholderFamily& family,
                                             int grid_n, double tol);

// Max |generator_residual_W| over an n x n log-spaced grid of [lo, hi]^2,
// reported as check "finvar".
GridReport certify_w_generator(const SeriesSolution& series, int grid_n, double tol,
                               double lo = 0.1, double hi = 10.0);

} // namespace bsharp
