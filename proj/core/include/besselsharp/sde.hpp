#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "besselsharp/burkholder.hpp"
#include "besselsharp/params.hpp"

namespace bsharp {

// Time stepping for the coupled pair driven by one Brownian motion:
//   dR =  dB + (d-1)/(2R) dt
//   dS = -dB + (d-1)/(2S) dt.
// euler_reflect: explicit Euler on (R, S) with post-step reflection into the
// positive half-line. euler_squared: Euler on (R^2, S^2) via
// d(R^2) = 2R dB + d dt with a positivity clamp at 0.
enum class Scheme { euler_reflect, euler_squared };

inline const char* to_string(Scheme s) {
    return s == Scheme::euler_reflect ? "euler_reflect" : "euler_squared";
}

struct SimConfig {
    Params params;
    double x0 = 1.0; // start of R
    double y0 = 1.0; // start of S
    double a = 0.0;  // barrier parameter; stop when S >= (1+a)/(1-a) R
    double dt = 1e-3;
    double t_max = 1.0;
    std::int64_t n_paths = 1000;
    std::uint64_t seed = 1;
    Scheme scheme = Scheme::euler_reflect;
    int threads = 0; // 0 = hardware concurrency; result independent of it

    void validate() const;
};

struct Estimate {
    double value = 0.0;
    double se = 0.0; // standard error
};

struct SimResult {
    std::int64_t n_paths = 0;
    std::int64_t n_stopped = 0;
    std::int64_t n_diverged = 0;
    std::int64_t n_s_near_zero = 0; // paths whose S dipped below 1e-6
    double frac_stopped = 0.0;
    Estimate mean_tau;        // tau ^ t_max over all paths
    Estimate p_norm_R;        // (mean R^p at tau ^ t_max)^(1/p)
    Estimate p_norm_S;
    Estimate ratio;           // p_norm_S / p_norm_R, delta-method error
    Estimate martingale_gap;  // mean W(R, S) at tau ^ t_max minus W(x0, y0)
    double w_start = 0.0;     // W(x0, y0)
    std::uint64_t seed = 0;
    Scheme scheme = Scheme::euler_reflect;
    double dt = 0.0, t_max = 0.0, a = 0.0, x0 = 0.0, y0 = 0.0, p = 0.0, d = 0.0;
    std::vector<std::string> warnings;
};

// Final state of one path, exposed for test observers.
struct PathEnd {
    std::int64_t index = 0;
    double R = 0.0, S = 0.0, tau = 0.0;
    bool stopped = false;
    bool diverged = false;
};

using PathObserver = std::function<void(const PathEnd&)>;

// Runs n_paths independent paths, each advanced with a shared Gaussian
// increment of opposite sign in the two equations, stopped at the first
// crossing of S = (1+a)/(1-a) R with linear back-interpolation onto the line
// (so stopped states satisfy the line equation exactly), capped at t_max.
// Per-path randomness is a counter-based stream keyed by (seed, path index)
// and batch accumulators are reduced in fixed order, so the result is
// bit-identical for any thread count. If an observer is given the run is
// forced single-threaded.
SimResult simulate_pair(const SimConfig& config, const BurkholderFamily& family,
                        const PathObserver& observer = nullptr);

struct MonotonicityReport {
    std::int64_t n_paths = 0;
    std::int64_t n_steps = 0;
    std::int64_t violations = 0;  // steps with d(R+S) < -1e-9 * max(1, R+S)
    double worst_increment = 0.0; // most negative step increment of R+S
};

// Checks that R + S is nondecreasing along every simulated path: the shared
// increment cancels in the sum, whose update is (d-1)/2 (1/R + 1/S) dt >= 0
// for euler_reflect up to interpolation rounding at the stop.
MonotonicityReport path_monotonicity_check(const SimConfig& config);

struct TwoStepResult {
    std::int64_t n_paths = 0;
    std::int64_t n_phase1_hit = 0;     // paths that reached the drop line by t=1
    std::int64_t n_phase2_stopped = 0; // paths stopped on the target line
    std::int64_t n_diverged = 0;
    Estimate p_norm_R;
    Estimate p_norm_S;
    Estimate ratio_RS; // p_norm_R / p_norm_S; approaches C_pd as a -> z0
    std::uint64_t seed = 0;
    double dt = 0.0, t_max = 0.0, a = 0.0, b = 0.0, x0 = 0.0, y0 = 0.0, p = 0.0, d = 0.0;
    std::vector<std::string> warnings;
};

// Sharpness construction for p > 2 with -1 < b < a < z0 < 0. Phase one lets
// the ratio drop to the line S = (1+b)/(1-b) R; if that does not happen by
// t = 1 the path stops at t = 1. Phase two stops at the first rise back to
// S = (1+a)/(1-a) R, capped at t_max. Starts already at or below the target
// line stop at the first rise directly (immediately when on the line).
TwoStepResult two_step_experiment(const SimConfig& config, const BurkholderFamily& family,
                                  double b, double a);

} // namespace bsharp
