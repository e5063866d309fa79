#pragma once

#include <string>

namespace bsharp {

// Outcome of certifying one inequality on one grid. Margins are signed slack
// relative to a local scale: positive means the inequality holds with room,
// and the check passes iff worst_margin >= -tol.
struct GridReport {
    std::string check_id;
    double p = 0.0;
    double d = 0.0;
    int grid_n = 0;
    double tol = 0.0;
    double worst_margin = 0.0;
    double worst_x = 0.0;
    double worst_y = 0.0;
    double worst_s = 0.0;
    std::string worst_region; // "inner", "outer", or "" when not applicable
    bool pass = false;
};

} // namespace bsharp
