#pragma once

#include <string>
#include <vector>

namespace bsharp {

// Unit-disc demonstration: pairs of analytic functions (F1, F2) with
// |F2(0)| <= |F1(0)| and |F2'| <= |F1'| on the disc, for which
// ||F2||_Hp <= C_{p,2} ||F1||_Hp. Built-in catalog (F1(z) = z throughout):
//   "z2half"  F2(z) = z^2 / 2
//   "z3third" F2(z) = z^3 / 3
//   "lambda"  F2(z) = lambda * z, |lambda| <= 1
struct HpReport {
    std::string pair_id;
    double p = 0.0;
    double lambda = 1.0;
    double norm_f1 = 0.0;
    double norm_f2 = 0.0;
    double ratio = 0.0;
    double c_p2 = 0.0;
    bool pass = false;
    int n_quadrature = 0;
    std::vector<double> radii;
};

// Hp norms by trapezoidal quadrature in the angle (n_quadrature nodes per
// circle) maximized over the radial grid. The default grid ends at r = 1;
// the catalog functions extend continuously to the boundary, where the
// supremum over r < 1 is attained in the limit.
HpReport hp_demo(const std::string& pair_id, double p,
                 std::vector<double> radii = {}, int n_quadrature = 512,
                 double lambda = 1.0);

} // namespace bsharp
