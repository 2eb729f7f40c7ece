#include "spectrank/spectra.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cassert>
#include <cmath>

#include "spectrank/errors.hpp"

namespace spectrank::spectra {

namespace {

Eigen::MatrixXd checked_symmetrize(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw ParamError("expected a non-empty square matrix");
  }
  if (!m.allFinite()) {
    throw DataError("matrix has non-finite entries");
  }
  const double asym = (m - m.transpose()).norm();
  if (asym > 1e-6 * m.norm()) {
    throw DataError("matrix asymmetry exceeds 1e-6 * ||M||_F");
  }
  return ((m + m.transpose()) * 0.5).eval();
}

}  // namespace

std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd s = checked_symmetrize(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s,
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw DataError("symmetric eigendecomposition failed to converge");
  }
#ifndef NDEBUG
  if (s.rows() <= 256) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> full(s);
    const Eigen::MatrixXd rebuilt = full.eigenvectors() *
                                    full.eigenvalues().asDiagonal() *
                                    full.eigenvectors().transpose();
    assert((rebuilt - s).norm() <= 1e-9 * (1.0 + s.norm()));
  }
#endif
  const Eigen::VectorXd ascending = solver.eigenvalues();
  std::vector<double> out(static_cast<size_t>(ascending.size()));
  for (Eigen::Index i = 0; i < ascending.size(); ++i) {
    out[static_cast<size_t>(i)] = ascending(ascending.size() - 1 - i);
  }
  return out;
}

Spectrum singular_values_symmetric(const Eigen::MatrixXd& m) {
  std::vector<double> values = symmetric_eigenvalues(m);
  for (double& v : values) {
    v = std::abs(v);
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  return Spectrum{std::move(values)};
}

int count_above_threshold(const Spectrum& spectrum, double theta) {
  if (!(theta >= 0.0)) {
    throw ParamError("count_above_threshold: theta must be >= 0");
  }
  const auto& v = spectrum.values;
  const auto it = std::lower_bound(
      v.begin(), v.end(), theta,
      [](double value, double threshold) { return value > threshold; });
  return static_cast<int>(it - v.begin());
}

}  // namespace spectrank::spectra
