#include "besselsharp/io.hpp"

#include <cstdint>
#include <cstdio>

#include <json.hpp>

namespace bsharp {

namespace {

using nlohmann::json;

json params_json(const Params& p) {
    return json{{"p", p.p},
                {"d", p.d},
                {"supercritical", p.supercritical},
                {"branch", to_string(p.branch)}};
}

json opt_json(const std::optional<double>& v) {
    if (v.has_value()) return json(*v);
    return json(nullptr);
}

json estimate_json(const Estimate& e) {
    return json{{"value", e.value}, {"stderr", e.se}};
}

} // namespace

std::string json_string(const SeriesSolution& s, int indent) {
    json coeffs = json::array();
    for (std::size_t n = 0; n < s.scaled_coeffs.size(); ++n) coeffs.push_back(s.coeff(n));
    json j{{"params", params_json(s.params)},
           {"coeffs", coeffs},
           {"n_terms", s.n_terms},
           {"polynomial_degree",
            s.polynomial_degree ? json(*s.polynomial_degree) : json(nullptr)},
           {"s_max_certified", s.s_max_certified},
           {"tail_tol", s.tail_tol}};
    return j.dump(indent);
}

std::string json_string(const ConstantsBundle& b, int indent) {
    json j{{"params", params_json(b.params)}, {"z0", opt_json(b.z0)},
           {"C_pd", opt_json(b.C_pd)},        {"c", opt_json(b.c)},
           {"s1", opt_json(b.s1)},            {"z1", opt_json(b.z1)},
           {"gprime_z0", opt_json(b.gprime_z0)}, {"status", b.status}};
    return j.dump(indent);
}

namespace {

json report_json(const GridReport& r) {
    json wp{{"x", r.worst_x}, {"y", r.worst_y}, {"s", r.worst_s}};
    if (!r.worst_region.empty()) wp["region"] = r.worst_region;
    return json{{"check_id", r.check_id}, {"p", r.p},
                {"d", r.d},               {"grid_n", r.grid_n},
                {"tol", r.tol},           {"worst_margin", r.worst_margin},
                {"worst_point", wp},      {"pass", r.pass}};
}

} // namespace

std::string json_string(const GridReport& r, int indent) {
    return report_json(r).dump(indent);
}

std::string json_string(const std::vector<GridReport>& reports, int indent) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(report_json(r));
    return arr.dump(indent);
}

std::string json_string(const SimResult& r, int indent) {
    json j{{"p", r.p},
           {"d", r.d},
           {"x0", r.x0},
           {"y0", r.y0},
           {"a", r.a},
           {"dt", r.dt},
           {"t_max", r.t_max},
           {"n_paths", r.n_paths},
           {"seed", r.seed},
           {"scheme", to_string(r.scheme)},
           {"n_stopped", r.n_stopped},
           {"n_diverged", r.n_diverged},
           {"n_s_near_zero", r.n_s_near_zero},
           {"frac_stopped", r.frac_stopped},
           {"mean_tau", estimate_json(r.mean_tau)},
           {"p_norm_R", estimate_json(r.p_norm_R)},
           {"p_norm_S", estimate_json(r.p_norm_S)},
           {"ratio", estimate_json(r.ratio)},
           {"martingale_gap", estimate_json(r.martingale_gap)},
           {"w_start", r.w_start},
           {"warnings", r.warnings}};
    return j.dump(indent);
}

std::string json_string(const TwoStepResult& r, int indent) {
    json j{{"p", r.p},
           {"d", r.d},
           {"x0", r.x0},
           {"y0", r.y0},
           {"a", r.a},
           {"b", r.b},
           {"dt", r.dt},
           {"t_max", r.t_max},
           {"n_paths", r.n_paths},
           {"seed", r.seed},
           {"n_phase1_hit", r.n_phase1_hit},
           {"n_phase2_stopped", r.n_phase2_stopped},
           {"n_diverged", r.n_diverged},
           {"p_norm_R", estimate_json(r.p_norm_R)},
           {"p_norm_S", estimate_json(r.p_norm_S)},
           {"ratio_RS", estimate_json(r.ratio_RS)},
           {"warnings", r.warnings}};
    return j.dump(indent);
}

std::string json_string(const MonotonicityReport& r, int indent) {
    json j{{"n_paths", r.n_paths},
           {"n_steps", r.n_steps},
           {"violations", r.violations},
           {"worst_increment", r.worst_increment}};
    return j.dump(indent);
}

std::string json_string(const HpReport& r, int indent) {
    json j{{"pair_id", r.pair_id},
           {"p", r.p},
           {"lambda", r.lambda},
           {"norm_F1", r.norm_f1},
           {"norm_F2", r.norm_f2},
           {"ratio", r.ratio},
           {"C_p2", r.c_p2},
           {"pass", r.pass},
           {"n_quadrature", r.n_quadrature},
           {"radii", r.radii}};
    return j.dump(indent);
}

std::string format_g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string csv_header() { return "p,d,z0,C_pd,c,s1,z1,status"; }

std::string csv_row(const ConstantsBundle& b) {
    auto field = [](const std::optional<double>& v) {
        return v.has_value() ? format_g17(*v) : std::string{};
    };
    std::string row = format_g17(b.params.p) + "," + format_g17(b.params.d) + "," +
                      field(b.z0) + "," + field(b.C_pd) + "," + field(b.c) + "," +
                      field(b.s1) + "," + field(b.z1) + "," + b.status;
    return row;
}

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001B3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace bsharp
