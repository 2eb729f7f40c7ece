#pragma once

#include <Eigen/Core>
#include <vector>

namespace spectrank::spectra {

/// Singular values sorted non-increasing; all entries finite and >= 0.
struct Spectrum {
  std::vector<double> values;
};

/// All eigenvalues of a symmetric matrix, sorted descending. The input is
/// symmetrized as (M + M^T)/2 first; asymmetry beyond 1e-6 * ||M||_F is a
/// DataError rather than being silently absorbed. Non-finite entries are a
/// DataError.
std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& m);

/// Absolute eigenvalues re-sorted descending; equals the SVD singular values
/// for symmetric input.
Spectrum singular_values_symmetric(const Eigen::MatrixXd& m);

/// |{i : sigma_i > theta}| with strict inequality. theta must be >= 0.
int count_above_threshold(const Spectrum& spectrum, double theta);

}  // namespace spectrank::spectra
