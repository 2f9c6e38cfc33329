#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "datasignal/error.hpp"

namespace datasignal {

/// Points are stored one per row. Row-major keeps a point contiguous, which
/// is also the order used by the JSON model format.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

struct KernelConfig {
  /// Bandwidth. The kernel is exp(-2*pi*r/gamma); gamma = 1 is the plain
  /// Laplace kernel exp(-2*pi*r).
  double gamma = 1.0;
  /// Regularization weight. 0 means exact interpolation.
  double alpha = 0.0;

  void validate() const;

  friend bool operator==(const KernelConfig&, const KernelConfig&) = default;
};

/// A data set {(x_i, y_i)}: an m x d argument matrix and an m x n value matrix.
class LabeledPointSet {
 public:
  LabeledPointSet(Matrix points, Matrix values);

  const Matrix& points() const noexcept { return points_; }
  const Matrix& values() const noexcept { return values_; }
  Eigen::Index size() const noexcept { return points_.rows(); }
  Eigen::Index dim() const noexcept { return points_.cols(); }
  Eigen::Index outputs() const noexcept { return values_.cols(); }

 private:
  Matrix points_;
  Matrix values_;
};

/// A fitted signal u(x) = sum_j coefficients_j * exp(-2*pi*|x - center_j|/gamma).
class Signal {
 public:
  /// Assembles a signal from stored parts (e.g. a loaded model). The fitted
  /// values at the centers are recomputed.
  Signal(Matrix centers, Matrix coefficients, KernelConfig config);

  const Matrix& centers() const noexcept { return centers_; }
  const Matrix& coefficients() const noexcept { return coefficients_; }
  const KernelConfig& config() const noexcept { return config_; }
  /// u at the centers; equals Y - alpha * lambda for a fresh fit.
  const Matrix& fitted_values() const noexcept { return fitted_values_; }
  /// ||(alpha I + M) lambda - Y||_inf of the fit that produced this signal
  /// (0 for signals assembled from stored coefficients).
  double residual() const noexcept { return residual_; }

  Eigen::Index dim() const noexcept { return centers_.cols(); }
  Eigen::Index size() const noexcept { return centers_.rows(); }
  Eigen::Index outputs() const noexcept { return coefficients_.cols(); }

 private:
  friend Signal fit_signal(const LabeledPointSet& data, const KernelConfig& config);
  friend Signal sum_signals(std::span<const Signal> signals);
  Signal(Matrix centers, Matrix coefficients, KernelConfig config, Matrix fitted_values,
         double residual);

  Matrix centers_;
  Matrix coefficients_;
  KernelConfig config_;
  Matrix fitted_values_;
  double residual_ = 0.0;
};

double laplace_kernel(double r, const KernelConfig& config);

/// log c_d with c_d = Gamma(d+1) / pi^((d+1)/2). Only the logarithm is
/// exposed: c_d overflows a double long before d = 784.
double normalizing_constant_log(int d);

/// Euclidean distance as sqrt of a squared distance clamped at zero.
double distance(std::span<const double> a, std::span<const double> b);

/// M_ij = laplace_kernel(|x_i - x_j|). Symmetric with unit diagonal.
Matrix build_gram(const Matrix& points, const KernelConfig& config);

/// K_ij = laplace_kernel(|q_i - c_j|) for q x m queries against m centers.
Matrix cross_kernel(const Matrix& queries, const Matrix& centers, const KernelConfig& config);

/// Solves (alpha I + M) lambda = Y for all columns of Y with one factorization.
///
/// Cholesky first; if that fails (alpha = 0 with nearly coincident points) a
/// pivoted LDL^T is tried. Exactly duplicated points with alpha = 0 and
/// non-finite inputs raise SingularSystem, as does a final residual above
/// 1e-10 * max(1, ||Y||_inf).
Signal fit_signal(const LabeledPointSet& data, const KernelConfig& config);

/// q x n matrix of signal values at each query row.
Matrix evaluate_signal(const Signal& signal, const Matrix& queries);

/// Columnwise sum of signals that share centers and configuration exactly.
Signal sum_signals(std::span<const Signal> signals);

/// The q x n matrix Y with Y(i, l) = 1 iff class_index[i] == l.
Matrix one_hot(std::span<const int> class_index, int classes);

}  // namespace datasignal
