#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace sw {

// Fixed-width numeric formatting shared by every CSV writer: 12 significant
// digits, scientific, so reruns are byte-identical.
std::string fmt12(double x);

// Least-squares slope of log(y) vs log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Deterministic RNG for starting vectors / random densities.
inline std::mt19937_64 make_rng(uint64_t seed) { return std::mt19937_64(seed); }

// Minimal SVG polyline plot (decorative only).
void write_svg_plot(const std::string& path, const std::vector<double>& x,
                    const std::vector<double>& y, const std::string& title);

// Atomic-ish file write: write to tmp then rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace sw
