#pragma once

#include <string>
#include <vector>

#include "besselsharp/burkholder.hpp"
#include "besselsharp/constants.hpp"
#include "besselsharp/hardy.hpp"
#include "besselsharp/sde.hpp"
#include "besselsharp/series.hpp"

namespace bsharp {

// JSON serialization (UTF-8, keys in fixed alphabetical order, shortest
// round-trip number formatting: output is deterministic byte-for-byte).
std::string json_string(const SeriesSolution& s, int indent = 2);
std::string json_string(const ConstantsBundle& b, int indent = 2);
std::string json_string(const GridReport& r, int indent = 2);
std::string json_string(const std::vector<GridReport>& r, int indent = 2);
std::string json_string(const SimResult& r, int indent = 2);
std::string json_string(const TwoStepResult& r, int indent = 2);
std::string json_string(const MonotonicityReport& r, int indent = 2);
std::string json_string(const HpReport& r, int indent = 2);

// 17 significant digits, '.' decimal separator, no locale dependence.
std::string format_g17(double x);

// CSV row format for constants tables. Absent values are empty fields, never
// NaN literals; the status column disambiguates.
std::string csv_header(); // "p,d,z0,C_pd,c,s1,z1,status"
std::string csv_row(const ConstantsBundle& b);

// FNV-1a 64-bit digest in hex, used in run manifests.
std::string fnv1a64_hex(const std::string& bytes);

} // namespace bsharp
