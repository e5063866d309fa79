#include "besselsharp/sde.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

#include "besselsharp/rng.hpp"

namespace bsharp {

namespace {

constexpr int kBatches = 100;

struct PathState {
    double R = 0.0, S = 0.0, tau = 0.0;
    bool stopped = false;
    bool diverged = false;
    bool near_zero = false;
};

// One Euler step of the coupled pair with shared increment dB.
inline void step_pair(Scheme scheme, double d, double h, double dB, double& R, double& S) {
    if (scheme == Scheme::euler_reflect) {
        const double half_drift = 0.5 * (d - 1.0);
        R = std::abs(R + dB + half_drift * h / R);
        S = std::abs(S - dB + half_drift * h / S);
    } else {
        double uR = R * R + 2.0 * R * dB + d * h;
        double uS = S * S - 2.0 * S * dB + d * h;
        R = std::sqrt(std::max(uR, 0.0));
        S = std::sqrt(std::max(uS, 0.0));
    }
}

// Advances one path until the first crossing of S = rho * R or t_max.
// Crossing states are placed exactly on the line by linear back-interpolation
// within the step.
PathState run_path(const SimConfig& cfg, double rho, CounterRng& rng) {
    PathState out;
    double R = cfg.x0, S = cfg.y0, t = 0.0;
    if (S >= rho * R) {
        out = {R, S, 0.0, true, false, false};
        return out;
    }
    const double d = cfg.params.d;
    const double sqrt_dt = std::sqrt(cfg.dt);
    bool near_zero = false;
    for (;;) {
        double h = cfg.dt;
        double sq = sqrt_dt;
        bool last = false;
        if (t + h >= cfg.t_max) {
            h = cfg.t_max - t;
            sq = std::sqrt(h);
            last = true;
        }
        if (!(h > 0.0)) {
            out = {R, S, cfg.t_max, false, false, near_zero};
            return out;
        }
        const double dB = sq * rng.next_gauss();
        double Rn = R, Sn = S;
        step_pair(cfg.scheme, d, h, dB, Rn, Sn);
        if (!std::isfinite(Rn) || !std::isfinite(Sn)) {
            out = {R, S, t, false, true, near_zero};
            return out;
        }
        if (Sn >= rho * Rn) {
            const double denom = (Sn - S) - rho * (Rn - R);
            double theta = denom != 0.0 ? (rho * R - S) / denom : 1.0;
            theta = std::clamp(theta, 0.0, 1.0);
            const double Rs = R + theta * (Rn - R);
            out = {Rs, rho * Rs, t + theta * h, true, false, near_zero};
            return out;
        }
        R = Rn;
        S = Sn;
        t += h;
        if (S < 1e-6) near_zero = true;
        if (last) {
            out = {R, S, cfg.t_max, false, false, near_zero};
            return out;
        }
    }
}

struct BatchAcc {
    double sum_Rp = 0.0, sum_Sp = 0.0, sum_W = 0.0, sum_tau = 0.0;
    std::int64_t count = 0, stopped = 0, diverged = 0, near_zero = 0;
};

struct MeanSe {
    double mean = 0.0, se = 0.0;
};

// Batch-means estimate: overall mean plus the standard error of the mean
// from the spread of per-batch means.
MeanSe batch_mean(const std::vector<double>& sums, const std::vector<std::int64_t>& counts) {
    double total = 0.0;
    std::int64_t n = 0;
    for (std::size_t b = 0; b < sums.size(); ++b) {
        total += sums[b];
        n += counts[b];
    }
    MeanSe out;
    if (n == 0) return out;
    out.mean = total / static_cast<double>(n);
    double ss = 0.0;
    int nb = 0;
    for (std::size_t b = 0; b < sums.size(); ++b) {
        if (counts[b] == 0) continue;
        const double m = sums[b] / static_cast<double>(counts[b]);
        ss += (m - out.mean) * (m - out.mean);
        ++nb;
    }
    if (nb > 1) out.se = std::sqrt(ss / (nb - 1) / nb);
    return out;
}

double batch_cov(const std::vector<double>& sums_a, const std::vector<double>& sums_b,
                 const std::vector<std::int64_t>& counts, double mean_a, double mean_b) {
    double ss = 0.0;
    int nb = 0;
    for (std::size_t b = 0; b < sums_a.size(); ++b) {
        if (counts[b] == 0) continue;
        const double ma = sums_a[b] / static_cast<double>(counts[b]);
        const double mb = sums_b[b] / static_cast<double>(counts[b]);
        ss += (ma - mean_a) * (mb - mean_b);
        ++nb;
    }
    if (nb > 1) return ss / (nb - 1) / nb;
    return 0.0;
}

// Runs fn(b) for b = 0..kBatches-1 distributed over threads; each batch is
// handled by exactly one thread, so accumulation order inside a batch is
// fixed and the combined result is independent of the thread count.
template <typename Fn>
void run_batches(int threads, Fn&& fn) {
    int T = threads;
    if (T <= 0) T = static_cast<int>(std::thread::hardware_concurrency());
    if (T < 1) T = 1;
    T = std::min(T, kBatches);

    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&](int w) {
        try {
            for (int b = w; b < kBatches; b += T) fn(b);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };
    if (T == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(T);
        for (int w = 0; w < T; ++w) pool.emplace_back(worker, w);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace

void SimConfig::validate() const {
    if (!(x0 > 0.0) || !(y0 > 0.0) || !std::isfinite(x0) || !std::isfinite(y0))
        fail("invalid-params", "x0, y0 must be positive");
    if (!(a > -1.0 && a < 1.0))
        fail("invalid-params", "a must lie in (-1, 1)");
    if (!(dt > 0.0) || !(t_max > 0.0))
        fail("invalid-params", "dt and t_max must be positive");
    if (dt > 1e-3 * t_max * (1.0 + 1e-12))
        fail("invalid-params", "dt must satisfy dt <= 1e-3 * t_max");
    if (n_paths < 1)
        fail("invalid-params", "n_paths >= 1 required");
    if (threads < 0)
        fail("invalid-params", "threads must be >= 0");
}

SimResult simulate_pair(const SimConfig& config, const BurkholderFamily& family,
                        const PathObserver& observer) {
    config.validate();
    const SeriesSolution& series = family.series();
    const Params& params = config.params;
    if (params.p != series.params.p || params.d != series.params.d)
        fail("invalid-params", "config and family disagree on (p, d)");

    const double rho = (1.0 + config.a) / (1.0 - config.a);
    if (config.a > series.s_max_certified)
        fail("range", "barrier parameter outside the certified series range");
    const double s_start = (config.y0 - config.x0) / (config.x0 + config.y0);
    if (s_start > series.s_max_certified)
        fail("range", "start point outside the certified series range");

    const double p = params.p;
    auto eval_w = [&](double R, double S) {
        const double u = R + S;
        return std::pow(u, p) * series.eval((S - R) / u, 0);
    };

    const std::int64_t n = config.n_paths;
    std::vector<BatchAcc> acc(kBatches);
    std::mutex observer_mutex;

    auto run_one_batch = [&](int b) {
        const std::int64_t begin = b * n / kBatches;
        const std::int64_t end = (b + 1) * n / kBatches;
        BatchAcc& A = acc[b];
        for (std::int64_t i = begin; i < end; ++i) {
            CounterRng rng(config.seed, static_cast<std::uint64_t>(i));
            const PathState st = run_path(config, rho, rng);
            if (observer) {
                std::lock_guard<std::mutex> lock(observer_mutex);
                observer(PathEnd{i, st.R, st.S, st.tau, st.stopped, st.diverged});
            }
            if (st.diverged || !std::isfinite(st.R + st.S) || !(st.R + st.S > 0.0)) {
                ++A.diverged;
                continue;
            }
            ++A.count;
            if (st.stopped) ++A.stopped;
            if (st.near_zero) ++A.near_zero;
            A.sum_Rp += std::pow(st.R, p);
            A.sum_Sp += std::pow(st.S, p);
            A.sum_W += eval_w(st.R, st.S);
            A.sum_tau += st.tau;
        }
    };
    run_batches(observer ? 1 : config.threads, run_one_batch);

    std::vector<double> sR(kBatches), sS(kBatches), sW(kBatches), sT(kBatches);
    std::vector<std::int64_t> cnt(kBatches);
    SimResult out;
    for (int b = 0; b < kBatches; ++b) {
        sR[b] = acc[b].sum_Rp;
        sS[b] = acc[b].sum_Sp;
        sW[b] = acc[b].sum_W;
        sT[b] = acc[b].sum_tau;
        cnt[b] = acc[b].count;
        out.n_stopped += acc[b].stopped;
        out.n_diverged += acc[b].diverged;
        out.n_s_near_zero += acc[b].near_zero;
    }

    const MeanSe mR = batch_mean(sR, cnt);
    const MeanSe mS = batch_mean(sS, cnt);
    const MeanSe mW = batch_mean(sW, cnt);
    const MeanSe mT = batch_mean(sT, cnt);

    out.n_paths = n;
    out.frac_stopped = static_cast<double>(out.n_stopped) / static_cast<double>(n);
    out.mean_tau = {mT.mean, mT.se};

    const double inv_p = 1.0 / p;
    out.p_norm_R = {std::pow(mR.mean, inv_p),
                    mR.se * inv_p * std::pow(mR.mean, inv_p - 1.0)};
    out.p_norm_S = {std::pow(mS.mean, inv_p),
                    mS.se * inv_p * std::pow(mS.mean, inv_p - 1.0)};

    // Delta method on (mean S^p, mean R^p) with batch-means covariance.
    {
        const double ratio = std::pow(mS.mean / mR.mean, inv_p);
        const double cov = batch_cov(sS, sR, cnt, mS.mean, mR.mean);
        const double rel_var = (mS.se * mS.se) / (mS.mean * mS.mean) +
                               (mR.se * mR.se) / (mR.mean * mR.mean) -
                               2.0 * cov / (mS.mean * mR.mean);
        out.ratio = {ratio, ratio * inv_p * std::sqrt(std::max(rel_var, 0.0))};
    }

    out.w_start = eval_w(config.x0, config.y0);
    out.martingale_gap = {mW.mean - out.w_start, mW.se};

    out.seed = config.seed;
    out.scheme = config.scheme;
    out.dt = config.dt;
    out.t_max = config.t_max;
    out.a = config.a;
    out.x0 = config.x0;
    out.y0 = config.y0;
    out.p = p;
    out.d = params.d;

    if (family.bundle().z0 && config.a >= *family.bundle().z0)
        out.warnings.push_back("a >= z0: not a convergence-experiment configuration");
    if (params.d < 2.0)
        out.warnings.push_back("d < 2: boundary behavior at 0 follows the scheme "
                               "(reflection / clamp), adopted convention");
    return out;
}

MonotonicityReport path_monotonicity_check(const SimConfig& config) {
    config.validate();
    const double rho = (1.0 + config.a) / (1.0 - config.a);
    const double d = config.params.d;

    MonotonicityReport rep;
    rep.n_paths = config.n_paths;
    rep.worst_increment = std::numeric_limits<double>::infinity();

    for (std::int64_t i = 0; i < config.n_paths; ++i) {
        CounterRng rng(config.seed, static_cast<std::uint64_t>(i));
        double R = config.x0, S = config.y0, t = 0.0;
        if (S >= rho * R) continue;
        const double sqrt_dt = std::sqrt(config.dt);
        for (;;) {
            double h = config.dt;
            double sq = sqrt_dt;
            bool last = false;
            if (t + h >= config.t_max) {
                h = config.t_max - t;
                sq = std::sqrt(h);
                last = true;
            }
            if (!(h > 0.0)) break;
            const double pre = R + S;
            const double dB = sq * rng.next_gauss();
            double Rn = R, Sn = S;
            step_pair(config.scheme, d, h, dB, Rn, Sn);
            if (!std::isfinite(Rn) || !std::isfinite(Sn)) break;

            double post;
            bool stopped = false;
            if (Sn >= rho * Rn) {
                const double denom = (Sn - S) - rho * (Rn - R);
                double theta = denom != 0.0 ? (rho * R - S) / denom : 1.0;
                theta = std::clamp(theta, 0.0, 1.0);
                const double Rs = R + theta * (Rn - R);
                post = Rs + rho * Rs;
                stopped = true;
            } else {
                post = Rn + Sn;
            }
            const double inc = post - pre;
            ++rep.n_steps;
            if (inc < rep.worst_increment) rep.worst_increment = inc;
            if (inc < -1e-9 * std::max(1.0, pre)) ++rep.violations;
            if (stopped) break;
            R = Rn;
            S = Sn;
            t += h;
            if (last) break;
        }
    }
    if (rep.n_steps == 0) rep.worst_increment = 0.0;
    return rep;
}

TwoStepResult two_step_experiment(const SimConfig& config, const BurkholderFamily& family,
                                  double b, double a) {
    config.validate();
    const Params& params = config.params;
    if (params.branch != Branch::p_greater_2)
        fail("invalid-params", "two-step experiment requires p > 2");
    if (!family.bundle().z0)
        fail("invalid-params", "two-step experiment requires a supercritical bundle");
    const double z0 = *family.bundle().z0;
    if (!(-1.0 < b && b < a && a < z0))
        fail("invalid-params", "require -1 < b < a < z0");

    const double rho_a = (1.0 + a) / (1.0 - a);
    const double rho_b = (1.0 + b) / (1.0 - b);
    const double d = params.d;
    const double p = params.p;
    const double phase1_horizon = std::min(1.0, config.t_max);
    const std::int64_t n = config.n_paths;

    struct Acc {
        double sum_Rp = 0.0, sum_Sp = 0.0;
        std::int64_t count = 0, phase1_hit = 0, phase2_stopped = 0, diverged = 0;
    };
    std::vector<Acc> acc(kBatches);

    auto run_one_batch = [&](int batch) {
        const std::int64_t begin = batch * n / kBatches;
        const std::int64_t end = (batch + 1) * n / kBatches;
        Acc& A = acc[batch];
        for (std::int64_t i = begin; i < end; ++i) {
            CounterRng rng(config.seed, static_cast<std::uint64_t>(i));
            double R = config.x0, S = config.y0, t = 0.0;
            int phase = (S <= rho_a * R) ? 2 : 1;
            bool stopped = false, diverged = false, phase1_hit = (phase == 2);
            if (phase == 2 && S >= rho_a * R) {
                // started exactly on the target line
                stopped = true;
            }
            const double sqrt_dt = std::sqrt(config.dt);
            while (!stopped && !diverged) {
                const double horizon = (phase == 1) ? phase1_horizon : config.t_max;
                double h = config.dt;
                double sq = sqrt_dt;
                bool last = false;
                if (t + h >= horizon) {
                    h = horizon - t;
                    sq = std::sqrt(h);
                    last = true;
                }
                if (!(h > 0.0)) {
                    if (phase == 1) break; // tau = 1 branch
                    break;                 // truncated at t_max
                }
                const double dB = sq * rng.next_gauss();
                double Rn = R, Sn = S;
                step_pair(config.scheme, d, h, dB, Rn, Sn);
                if (!std::isfinite(Rn) || !std::isfinite(Sn)) {
                    diverged = true;
                    break;
                }
                if (phase == 1) {
                    if (Sn <= rho_b * Rn) {
                        // dropped onto the lower line; enter phase 2 there
                        const double denom = rho_b * (Rn - R) - (Sn - S);
                        double theta = denom != 0.0 ? (S - rho_b * R) / denom : 1.0;
                        theta = std::clamp(theta, 0.0, 1.0);
                        R = R + theta * (Rn - R);
                        S = rho_b * R;
                        t += theta * h;
                        phase = 2;
                        phase1_hit = true;
                        continue;
                    }
                    R = Rn;
                    S = Sn;
                    t += h;
                    if (last) break; // tau = 1: keep the time-1 state
                } else {
                    if (Sn >= rho_a * Rn) {
                        const double denom = (Sn - S) - rho_a * (Rn - R);
                        double theta = denom != 0.0 ? (rho_a * R - S) / denom : 1.0;
                        theta = std::clamp(theta, 0.0, 1.0);
                        R = R + theta * (Rn - R);
                        S = rho_a * R;
                        t += theta * h;
                        stopped = true;
                        break;
                    }
                    R = Rn;
                    S = Sn;
                    t += h;
                    if (last) break; // truncated at t_max
                }
            }
            if (diverged || !std::isfinite(R + S)) {
                ++A.diverged;
                continue;
            }
            ++A.count;
            if (phase1_hit) ++A.phase1_hit;
            if (stopped) ++A.phase2_stopped;
            A.sum_Rp += std::pow(R, p);
            A.sum_Sp += std::pow(S, p);
        }
    };
    run_batches(config.threads, run_one_batch);

    std::vector<double> sR(kBatches), sS(kBatches);
    std::vector<std::int64_t> cnt(kBatches);
    TwoStepResult out;
    for (int i = 0; i < kBatches; ++i) {
        sR[i] = acc[i].sum_Rp;
        sS[i] = acc[i].sum_Sp;
        cnt[i] = acc[i].count;
        out.n_phase1_hit += acc[i].phase1_hit;
        out.n_phase2_stopped += acc[i].phase2_stopped;
        out.n_diverged += acc[i].diverged;
    }
    const MeanSe mR = batch_mean(sR, cnt);
    const MeanSe mS = batch_mean(sS, cnt);
    const double inv_p = 1.0 / p;

    out.n_paths = n;
    out.p_norm_R = {std::pow(mR.mean, inv_p),
                    mR.se * inv_p * std::pow(mR.mean, inv_p - 1.0)};
    out.p_norm_S = {std::pow(mS.mean, inv_p),
                    mS.se * inv_p * std::pow(mS.mean, inv_p - 1.0)};
    {
        const double ratio = std::pow(mR.mean / mS.mean, inv_p);
        const double cov = batch_cov(sR, sS, cnt, mR.mean, mS.mean);
        const double rel_var = (mR.se * mR.se) / (mR.mean * mR.mean) +
                               (mS.se * mS.se) / (mS.mean * mS.mean) -
                               2.0 * cov / (mR.mean * mS.mean);
        out.ratio_RS = {ratio, ratio * inv_p * std::sqrt(std::max(rel_var, 0.0))};
    }

    out.seed = config.seed;
    out.dt = config.dt;
    out.t_max = config.t_max;
    out.a = a;
    out.b = b;
    out.x0 = config.x0;
    out.y0 = config.y0;
    out.p = p;
    out.d = d;
    if (config.t_max < 1.0)
        out.warnings.push_back("t_max < 1: phase-1 horizon truncated to t_max");
    return out;
}

} // namespace bsharp
