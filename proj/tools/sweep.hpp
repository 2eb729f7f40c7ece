#pragma once

#include <cstdint>
#include <string>

#include "config.hpp"

namespace cli {

// Runs the configured parameter sweep and returns the full CSV text
// (header + one row per (point, run), LF line endings). Rows are produced
// in canonical (point, run) order; a rerun with the same config and seed is
// byte-identical. Per-run failures become rows with the error flag set
// instead of aborting the sweep.
std::string run_sweep(const Config& config, uint64_t seed);

// Aggregates a sweep CSV into per-curve series files (mean over runs at each
// swept value, vacuous and error rows excluded). figure selects the curve
// set: "residuals" (frob_R, spec_R, delta_r, sv_K, sv_K_plus_1), "spectral"
// (sigma1_hat, sigma1_bar, sigmaK_under) or "kbounds" (k_lower, k_upper).
// Writes one file per curve named <out_prefix><curve>.dat and returns the
// number of files written.
int write_plotdata(const std::string& csv_path, const std::string& figure,
                   const std::string& out_prefix);

}  // namespace cli
