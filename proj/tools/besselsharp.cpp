// Command-line front end: constants tables, verification suites, Monte Carlo
// simulations and report persistence.
//
// Exit codes: 0 success, 1 invalid parameters / IO error, 2 no finite
// constant (p + d <= 2), 3 failed verification check, 4 diverged paths.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "besselsharp/burkholder.hpp"
#include "besselsharp/constants.hpp"
#include "besselsharp/hardy.hpp"
#include "besselsharp/io.hpp"
#include "besselsharp/sde.hpp"
#include "besselsharp/version.hpp"

namespace {

using nlohmann::json;

std::vector<std::string> g_argv;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) bsharp::fail("io", "cannot open '" + path + "' for writing");
    out << content;
    if (!out) bsharp::fail("io", "write to '" + path + "' failed");
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Writes the primary output and a reproduction manifest alongside it.
void emit(const std::string& out_path, const std::string& content, const json& config) {
    if (out_path.empty()) {
        std::cout << content << "\n";
        return;
    }
    write_file(out_path, content);
    json manifest{{"version", bsharp::version},
                  {"timestamp", iso_timestamp()},
                  {"command", g_argv},
                  {"config", config},
                  {"outputs", json::array({json{{"path", out_path},
                                                {"bytes", content.size()},
                                                {"fnv1a64", bsharp::fnv1a64_hex(content)}}})}};
    write_file(out_path + ".manifest.json", manifest.dump(2));
}

// Parses "a,b,c" lists and "start:stop:step" ranges of doubles.
std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            out.push_back(std::stod(item));
            continue;
        }
        const auto colon2 = item.find(':', colon + 1);
        if (colon2 == std::string::npos)
            bsharp::fail("invalid-params", "range must be start:stop:step");
        const double start = std::stod(item.substr(0, colon));
        const double stop = std::stod(item.substr(colon + 1, colon2 - colon - 1));
        const double step = std::stod(item.substr(colon2 + 1));
        if (!(step > 0.0)) bsharp::fail("invalid-params", "range step must be positive");
        for (double v = start; v <= stop + 1e-12 * step; v += step) out.push_back(v);
    }
    if (out.empty()) bsharp::fail("invalid-params", "empty value list");
    return out;
}

std::string report_line(const bsharp::GridReport& r) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "%-6s check=%-13s p=%-6g d=%-4g grid_n=%-6d tol=%-8g worst_margin=% .3e at s=% .6f",
                  r.pass ? "pass" : "FAIL", r.check_id.c_str(), r.p, r.d, r.grid_n,
                  r.tol, r.worst_margin, r.worst_s);
    return buf;
}

int run_constants(double p, double d, const std::string& out_path,
                  const std::string& dump_series) {
    const auto params = bsharp::Params::make(p, d);
    const auto sr = bsharp::solve_constants(params);
    emit(out_path, bsharp::json_string(sr.bundle), json{{"p", p}, {"d", d}});
    if (!dump_series.empty()) write_file(dump_series, bsharp::json_string(sr.series));
    return sr.bundle.status == "no-finite-constant" ? 2 : 0;
}

int run_table(const std::string& p_list, const std::string& d_list,
              const std::string& out_path, const std::string& format) {
    const auto ps = parse_value_list(p_list);
    const auto ds = parse_value_list(d_list);

    std::vector<bsharp::ConstantsBundle> rows;
    for (const double d : ds) {
        for (const double p : ps) {
            bsharp::ConstantsBundle bundle;
            try {
                const auto params = bsharp::Params::make(p, d);
                bundle = bsharp::solve_constants(params).bundle;
            } catch (const bsharp::Error& e) {
                bundle.params.p = p;
                bundle.params.d = d;
                bundle.status = (e.id() == "invalid-params") ? "invalid-params" : e.id();
            }
            rows.push_back(std::move(bundle));
        }
    }

    std::string content;
    if (format == "csv") {
        content = bsharp::csv_header() + "\n";
        for (const auto& b : rows) content += bsharp::csv_row(b) + "\n";
    } else if (format == "json") {
        json arr = json::array();
        for (const auto& b : rows) arr.push_back(json::parse(bsharp::json_string(b)));
        content = arr.dump(2);
    } else {
        bsharp::fail("invalid-params", "format must be csv or json");
    }
    emit(out_path, content, json{{"p", p_list}, {"d", d_list}, {"format", format}});
    return 0;
}

int run_verify(double p, double d, int grid_n, double tol, const std::string& checks,
               const std::string& out_path, const std::string& format) {
    const auto params = bsharp::Params::make(p, d);
    const auto sr = bsharp::solve_constants(params);

    std::vector<bsharp::GridReport> reports;

    // Series residual suite: 1001-point grid over the certified range.
    {
        bsharp::GridReport r;
        r.check_id = "ode-residual";
        r.p = p;
        r.d = d;
        r.grid_n = 1001;
        r.tol = 1e-8;
        double worst = 0.0, at = 0.0;
        for (int i = 0; i < 1001; ++i) {
            const double lo = -1.0 + 1e-6;
            const double s = lo + (sr.series.s_max_certified - lo) * i / 1000;
            const double res = std::abs(sr.series.ode_residual(s));
            if (res > worst) {
                worst = res;
                at = s;
            }
        }
        r.worst_margin = r.tol - worst;
        r.worst_s = at;
        r.worst_x = 1.0 - at;
        r.worst_y = 1.0 + at;
        r.pass = worst <= r.tol;
        reports.push_back(std::move(r));
    }

    if (params.supercritical) {
        auto g_reports = bsharp::verify_g_properties(sr.series, sr.bundle, grid_n, tol);
        reports.insert(reports.end(), g_reports.begin(), g_reports.end());
        bsharp::BurkholderFamily family(sr.bundle, sr.series);
        auto u_reports = bsharp::certify_inequalities(family, grid_n, tol);
        reports.insert(reports.end(), u_reports.begin(), u_reports.end());
    }

    if (!checks.empty()) {
        std::vector<bsharp::GridReport> filtered;
        std::stringstream ss(checks);
        std::string id;
        std::vector<std::string> ids;
        while (std::getline(ss, id, ',')) ids.push_back(id);
        for (auto& r : reports)
            for (const auto& want : ids)
                if (r.check_id == want) filtered.push_back(r);
        reports = std::move(filtered);
    }

    bool all_pass = true;
    for (const auto& r : reports) {
        std::cout << report_line(r) << "\n";
        all_pass = all_pass && r.pass;
    }
    if (!out_path.empty() || format == "json")
        emit(out_path, bsharp::json_string(reports),
             json{{"p", p}, {"d", d}, {"grid_n", grid_n}, {"tol", tol}});
    return all_pass ? 0 : 3;
}

struct SimFlags {
    double p = 2.0, d = 2.0, x0 = 1.0, y0 = 1.0, a = 0.0, b = -0.5;
    double dt = 1e-4, t_max = 5.0;
    std::int64_t paths = 100000;
    std::uint64_t seed = 1;
    int threads = 0;
    std::string scheme = "reflect";
    std::string out;
};

bsharp::SimConfig make_config(const SimFlags& f) {
    bsharp::SimConfig cfg;
    cfg.params = bsharp::Params::make(f.p, f.d);
    cfg.x0 = f.x0;
    cfg.y0 = f.y0;
    cfg.a = f.a;
    cfg.dt = f.dt;
    cfg.t_max = f.t_max;
    cfg.n_paths = f.paths;
    cfg.seed = f.seed;
    cfg.threads = f.threads;
    if (f.scheme == "reflect")
        cfg.scheme = bsharp::Scheme::euler_reflect;
    else if (f.scheme == "squared")
        cfg.scheme = bsharp::Scheme::euler_squared;
    else
        bsharp::fail("invalid-params", "scheme must be reflect or squared");
    return cfg;
}

json config_json(const SimFlags& f) {
    return json{{"p", f.p},       {"d", f.d},         {"x0", f.x0},
                {"y0", f.y0},     {"a", f.a},         {"b", f.b},
                {"dt", f.dt},     {"t_max", f.t_max}, {"paths", f.paths},
                {"seed", f.seed}, {"scheme", f.scheme}};
}

int run_simulate_bessel(const SimFlags& f) {
    const auto cfg = make_config(f);
    const auto sr = bsharp::solve_constants(cfg.params);
    bsharp::BurkholderFamily family(sr.bundle, sr.series);
    const auto result = bsharp::simulate_pair(cfg, family);
    emit(f.out, bsharp::json_string(result), config_json(f));
    return result.n_diverged > 0 ? 4 : 0;
}

int run_simulate_twostep(const SimFlags& f) {
    auto cfg = make_config(f);
    cfg.a = 0.0; // phases use explicit a and b
    const auto sr = bsharp::solve_constants(cfg.params);
    bsharp::BurkholderFamily family(sr.bundle, sr.series);
    const auto result = bsharp::two_step_experiment(cfg, family, f.b, f.a);
    emit(f.out, bsharp::json_string(result), config_json(f));
    return result.n_diverged > 0 ? 4 : 0;
}

int run_simulate_hp(const std::string& pair, double p, double lambda, int quad_n,
                    const std::string& out) {
    const auto rep = bsharp::hp_demo(pair, p, {}, quad_n, lambda);
    emit(out, bsharp::json_string(rep),
         json{{"pair", pair}, {"p", p}, {"lambda", lambda}, {"quad_n", quad_n}});
    return rep.pass ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    for (int i = 0; i < argc; ++i) g_argv.emplace_back(argv[i]);

    CLI::App app{"Sharp constants for coupled Bessel-process norm comparison"};
    app.set_version_flag("--version", bsharp::version);
    app.require_subcommand(1);

    // constants
    double p = 2.0, d = 2.0;
    std::string out_path, dump_series;
    auto* cmd_constants = app.add_subcommand("constants", "Constants for one (p, d) as JSON");
    cmd_constants->add_option("--p", p, "exponent p > 0")->required();
    cmd_constants->add_option("--d", d, "dimension d > 1")->required();
    cmd_constants->add_option("--out", out_path, "output file (default stdout)");
    cmd_constants->add_option("--dump-series", dump_series, "write the series solution JSON here");

    // table
    std::string p_list, d_list, format = "csv";
    auto* cmd_table = app.add_subcommand("table", "Constants table over p and d lists");
    cmd_table->add_option("--p", p_list, "p values: comma list or start:stop:step")->required();
    cmd_table->add_option("--d", d_list, "d values: comma list or start:stop:step")->required();
    cmd_table->add_option("--out", out_path, "output file (default stdout)");
    cmd_table->add_option("--format", format, "csv|json (default csv)");

    // verify
    int grid_n = 2001;
    double tol = 1e-9;
    std::string checks;
    auto* cmd_verify = app.add_subcommand("verify", "Run the inequality certification suite");
    cmd_verify->add_option("--p", p, "exponent p > 0")->required();
    cmd_verify->add_option("--d", d, "dimension d > 1")->required();
    cmd_verify->add_option("--grid-n", grid_n, "grid size (default 2001)");
    cmd_verify->add_option("--tol", tol, "margin tolerance (default 1e-9)");
    cmd_verify->add_option("--checks", checks, "comma list of check ids to run");
    cmd_verify->add_option("--out", out_path, "write JSON reports here");
    cmd_verify->add_option("--format", format, "set to json to print reports as JSON");

    // simulate
    SimFlags f;
    std::string pair = "z2half";
    double lambda = 1.0;
    int quad_n = 512;
    auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo experiments");
    cmd_sim->require_subcommand(1);

    auto add_sim_flags = [&](CLI::App* c, bool with_b) {
        c->add_option("--p", f.p, "exponent p > 0")->required();
        c->add_option("--d", f.d, "dimension d > 1")->required();
        c->add_option("--x0", f.x0, "start of R (default 1)");
        c->add_option("--y0", f.y0, "start of S (default 1)");
        c->add_option("--a", f.a, "barrier parameter in (-1, 1)");
        if (with_b) c->add_option("--b", f.b, "drop parameter, b < a");
        c->add_option("--dt", f.dt, "time step (default 1e-4)");
        c->add_option("--t-max", f.t_max, "horizon cap (default 5)");
        c->add_option("--paths", f.paths, "number of paths (default 100000)");
        c->add_option("--seed", f.seed, "RNG seed (default 1)");
        c->add_option("--threads", f.threads, "worker threads (0 = hardware)");
        c->add_option("--scheme", f.scheme, "reflect|squared (default reflect)");
        c->add_option("--out", f.out, "output file (default stdout)");
    };
    auto* sim_bessel = cmd_sim->add_subcommand("bessel", "Coupled pair with one-barrier stopping");
    add_sim_flags(sim_bessel, false);
    auto* sim_twostep = cmd_sim->add_subcommand("twostep", "Two-phase stopping rule (p > 2)");
    add_sim_flags(sim_twostep, true);
    auto* sim_hp = cmd_sim->add_subcommand("hp", "Unit-disc Hp norm comparison");
    sim_hp->add_option("--pair", pair, "z2half|z3third|lambda")->required();
    sim_hp->add_option("--p", f.p, "exponent p > 0")->required();
    sim_hp->add_option("--lambda", lambda, "scale for the lambda pair (|lambda| <= 1)");
    sim_hp->add_option("--quad-n", quad_n, "quadrature nodes per circle (default 512)");
    sim_hp->add_option("--out", f.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        if (*cmd_constants) return run_constants(p, d, out_path, dump_series);
        if (*cmd_table) return run_table(p_list, d_list, out_path, format);
        if (*cmd_verify) return run_verify(p, d, grid_n, tol, checks, out_path, format);
        if (*sim_bessel) return run_simulate_bessel(f);
        if (*sim_twostep) return run_simulate_twostep(f);
        if (*sim_hp) return run_simulate_hp(pair, f.p, lambda, quad_n, f.out);
    } catch (const bsharp::Error& e) {
        std::cerr << "error [" << e.id() << "]: " << e.what() << "\n";
        if (e.id() == "invalid-params" || e.id() == "io" || e.id() == "unknown-pair") return 1;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
