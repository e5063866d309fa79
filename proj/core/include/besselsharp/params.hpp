#pragma once

#include <cmath>
#include <string>

#include "besselsharp/error.hpp"

namespace bsharp {

// Exponent regime of p. The p == 2 case is detected on the exact input value;
// it is the only regime where the profile function degenerates to a polynomial
// for every d.
enum class Branch { p_less_1, p_1_to_2, p_equal_2, p_greater_2 };

inline const char* to_string(Branch b) {
    switch (b) {
        case Branch::p_less_1: return "p_less_1";
        case Branch::p_1_to_2: return "p_1_to_2";
        case Branch::p_equal_2: return "p_equal_2";
        case Branch::p_greater_2: return "p_greater_2";
    }
    return "?";
}

// Validated (p, d) pair. Requires p > 0 and d > 1; d need not be an integer.
// supercritical <=> p + d > 2, the regime where a finite norm constant exists.
struct Params {
    double p = 0.0;
    double d = 0.0;
    bool supercritical = false;
    Branch branch = Branch::p_equal_2;

    static Params make(double p, double d) {
        if (!(std::isfinite(p) && std::isfinite(d)) || !(p > 0.0) || !(d > 1.0)) {
            fail("invalid-params",
                 "require p > 0 and d > 1, got p=" + std::to_string(p) +
                     " d=" + std::to_string(d));
        }
        Params out;
        out.p = p;
        out.d = d;
        out.supercritical = (p + d > 2.0);
        if (p == 2.0)
            out.branch = Branch::p_equal_2;
        else if (p > 2.0)
            out.branch = Branch::p_greater_2;
        else if (p >= 1.0)
            out.branch = Branch::p_1_to_2;
        else
            out.branch = Branch::p_less_1;
        return out;
    }
};

} // namespace bsharp
