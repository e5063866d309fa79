#pragma once

#include <optional>
#include <string>
#include <vector>

#include "besselsharp/report.hpp"
#include "besselsharp/series.hpp"

namespace bsharp {

// Constants attached to one (p, d): the first root z0 of g, the norm constant
// C_pd = (1+z0)/(1-z0) for p <= 2 and (1-z0)/(1+z0) for p > 2, the gluing
// constant c, the inflection point s1 of the payoff section, and the tangency
// point z1 (equal to z0 unless p < 1 forces an interior tangency).
//
// status: "ok", "near-critical" (z0 > 1 - 1e-4, conditioning degrades), or
// "no-finite-constant" (p + d <= 2; z0, C_pd and the rest are absent).
struct ConstantsBundle {
    Params params;
    std::optional<double> z0;
    std::optional<double> C_pd;
    std::optional<double> c;
    std::optional<double> s1;
    std::optional<double> z1;
    std::optional<double> gprime_z0;
    std::string status = "ok";
};

// First root of g in [-1, s_max_certified]: scans a 4096-point grid for the
// first sign change from negative and refines by bisection to width 1e-14.
// Returns nullopt when p + d <= 2 and g has no root. Throws
// "root-beyond-range" when p + d > 2 but the root lies past the certified
// range (rebuild the series with a larger s_max).
std::optional<double> find_z0(const SeriesSolution& series);

// Branch formula for the norm constant; z0 in (-1, 1).
double compute_C(const Params& params, double z0);

// Payoff section v(s) = ((1+s)/2)^p - K^p ((1-s)/2)^p with K = (1+z0)/(1-z0),
// or its first/second derivative.
double payoff_section(const Params& params, double z0, double s, int deriv_order = 0);

// Gluing constant. For p >= 1 the closed form 2p(1+z0)^{p-1} / (2^p g'(z0)(1-z0))
// (equivalently v'(z0)/g'(z0)); for p < 1 the infimum of v/g over [-1, z0),
// located on a 4001-point grid with golden-section refinement and compared
// against the boundary limit.
double compute_c(const SeriesSolution& series, double z0);

// Root of (1+s)^{p-2} = K^p (1-s)^{p-2} in closed form; absent for p = 2.
std::optional<double> compute_s1(const Params& params, double z0);

// Tangency point of c*g against v: z0 for p >= 1, the variational argmin for
// p < 1 (validated against the tangency conditions; throws "z1-not-found").
double compute_z1(const SeriesSolution& series, double z0, double c);

struct SolveOptions {
    double tail_tol = 1e-15;
    std::size_t max_terms = 200000;
};

struct SolveResult {
    ConstantsBundle bundle;
    SeriesSolution series;
};

// Full pipeline for one (p, d). Escalates the certified range of the series
// (0.95, 0.99, 0.999, 0.9995, then a relaxed near-critical rung) until z0 is
// inside it.
SolveResult solve_constants(const Params& params, const SolveOptions& opt = {});

// Grid certification of the profile-function inequalities: monotonicity and
// convexity of g up to z0, the root sign pattern, the four first-order
// differential inequalities, the majorization of v by c*g (direction per
// branch), the tangency conditions at z1, and the d = 2 reflection identity.
// Requires a supercritical bundle.
std::vector<GridReport> verify_g_properties(const SeriesSolution& series,
                                            const ConstantsBundle& bundle,
                                            int grid_n, double tol);

} // namespace bsharp
