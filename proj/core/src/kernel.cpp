#include "datasignal/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace datasignal {

namespace {

constexpr Eigen::Index kEvalBlockRows = 512;
constexpr int kMaxRefinementSteps = 3;

bool all_finite(const Matrix& m) { return m.allFinite(); }

double sup_norm(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::span<const double> row_span(const Matrix& m, Eigen::Index i) {
  return {m.data() + i * m.cols(), static_cast<std::size_t>(m.cols())};
}

bool has_duplicate_rows(const Matrix& points) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(points.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto less = [&](Eigen::Index a, Eigen::Index b) {
    auto ra = row_span(points, a);
    auto rb = row_span(points, b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  };
  std::sort(order.begin(), order.end(), less);
  for (std::size_t i = 1; i < order.size(); ++i) {
    auto ra = row_span(points, order[i - 1]);
    auto rb = row_span(points, order[i]);
    if (std::equal(ra.begin(), ra.end(), rb.begin())) return true;
  }
  return false;
}

}  // namespace

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::IncompatibleSignals: return "IncompatibleSignals";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::WrongClassCount: return "WrongClassCount";
    case ErrorCode::InvalidRate: return "InvalidRate";
    case ErrorCode::NotSPD: return "NotSPD";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::ZeroImage: return "ZeroImage";
    case ErrorCode::InsufficientClassMembers: return "InsufficientClassMembers";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::NetworkError: return "NetworkError";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
  }
  return "Unknown";
}

void KernelConfig::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::InvalidArgument, "gamma must be positive and finite");
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must be nonnegative and finite");
  }
}

LabeledPointSet::LabeledPointSet(Matrix points, Matrix values)
    : points_(std::move(points)), values_(std::move(values)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw Error(ErrorCode::InvalidArgument, "a data set needs at least one point of dimension >= 1");
  }
  if (values_.rows() != points_.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(values_.rows()) + " value rows for " +
                    std::to_string(points_.rows()) + " points");
  }
  if (values_.cols() < 1) {
    throw Error(ErrorCode::InvalidArgument, "values need at least one column");
  }
}

Signal::Signal(Matrix centers, Matrix coefficients, KernelConfig config)
    : centers_(std::move(centers)), coefficients_(std::move(coefficients)), config_(config) {
  config_.validate();
  if (centers_.rows() != coefficients_.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "coefficient rows must match center rows");
  }
  if (centers_.rows() < 1 || centers_.cols() < 1 || coefficients_.cols() < 1) {
    throw Error(ErrorCode::InvalidArgument, "empty signal");
  }
  fitted_values_ = evaluate_signal(*this, centers_);
}

Signal::Signal(Matrix centers, Matrix coefficients, KernelConfig config, Matrix fitted_values,
               double residual)
    : centers_(std::move(centers)),
      coefficients_(std::move(coefficients)),
      config_(config),
      fitted_values_(std::move(fitted_values)),
      residual_(residual) {}

double laplace_kernel(double r, const KernelConfig& config) {
  return std::exp(-2.0 * std::numbers::pi * r / config.gamma);
}

double normalizing_constant_log(int d) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
  const double n = static_cast<double>(d);
  return std::lgamma(n + 1.0) - 0.5 * (n + 1.0) * std::log(std::numbers::pi);
}

double distance(std::span<const double> a, std::span<const double> b) {
  double sq = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    sq += diff * diff;
  }
  return std::sqrt(std::max(sq, 0.0));
}

Matrix build_gram(const Matrix& points, const KernelConfig& config) {
  config.validate();
  const Eigen::Index m = points.rows();
  Matrix gram(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    gram(i, i) = 1.0;
    const auto xi = row_span(points, i);
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double k = laplace_kernel(distance(xi, row_span(points, j)), config);
      gram(i, j) = k;
      gram(j, i) = k;
    }
  }
  return gram;
}

Matrix cross_kernel(const Matrix& queries, const Matrix& centers, const KernelConfig& config) {
  config.validate();
  if (queries.rows() > 0 && queries.cols() != centers.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "queries have width " + std::to_string(queries.cols()) + ", centers " +
                    std::to_string(centers.cols()));
  }
  Matrix k(queries.rows(), centers.rows());
  for (Eigen::Index i = 0; i < queries.rows(); ++i) {
    const auto q = row_span(queries, i);
    for (Eigen::Index j = 0; j < centers.rows(); ++j) {
      k(i, j) = laplace_kernel(distance(q, row_span(centers, j)), config);
    }
  }
  return k;
}

Signal fit_signal(const LabeledPointSet& data, const KernelConfig& config) {
  config.validate();
  const Matrix& x = data.points();
  const Matrix& y = data.values();
  if (!all_finite(x) || !all_finite(y)) {
    throw Error(ErrorCode::SingularSystem, "non-finite entries in the data set");
  }
  if (config.alpha == 0.0 && has_duplicate_rows(x)) {
    throw Error(ErrorCode::SingularSystem, "duplicate points with alpha = 0");
  }

  Matrix system = build_gram(x, config);
  system.diagonal().array() += config.alpha;

  // Column-major copies keep Eigen's factorizations on their fast path.
  const Eigen::MatrixXd a = system;
  const Eigen::MatrixXd rhs = y;
  Eigen::MatrixXd lambda;

  Eigen::LLT<Eigen::MatrixXd> llt(a);
  Eigen::LDLT<Eigen::MatrixXd> ldlt;
  const bool use_llt = llt.info() == Eigen::Success;
  if (use_llt) {
    lambda = llt.solve(rhs);
  } else {
    ldlt.compute(a);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      throw Error(ErrorCode::SingularSystem, "factorization of (alpha I + M) failed");
    }
    lambda = ldlt.solve(rhs);
  }

  const double tolerance = 1e-10 * std::max(1.0, sup_norm(y));
  Eigen::MatrixXd residual = rhs - a * lambda;
  double residual_norm = residual.size() ? residual.cwiseAbs().maxCoeff() : 0.0;
  for (int step = 0; step < kMaxRefinementSteps && residual_norm > tolerance; ++step) {
    lambda += use_llt ? Eigen::MatrixXd(llt.solve(residual)) : Eigen::MatrixXd(ldlt.solve(residual));
    residual = rhs - a * lambda;
    residual_norm = residual.cwiseAbs().maxCoeff();
  }
  if (!std::isfinite(residual_norm) || residual_norm > tolerance) {
    throw Error(ErrorCode::SingularSystem,
                "residual " + std::to_string(residual_norm) + " exceeds tolerance");
  }

  Matrix coefficients = lambda;
  Matrix fitted = y - config.alpha * coefficients;
  return Signal(x, std::move(coefficients), config, std::move(fitted), residual_norm);
}

Matrix evaluate_signal(const Signal& signal, const Matrix& queries) {
  if (queries.rows() > 0 && queries.cols() != signal.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "queries have width " + std::to_string(queries.cols()) + ", signal dimension is " +
                    std::to_string(signal.dim()));
  }
  Matrix out(queries.rows(), signal.outputs());
  for (Eigen::Index start = 0; start < queries.rows(); start += kEvalBlockRows) {
    const Eigen::Index rows = std::min(kEvalBlockRows, queries.rows() - start);
    const Matrix block = queries.middleRows(start, rows);
    const Matrix k = cross_kernel(block, signal.centers(), signal.config());
    // Fixed summation order per query: center 0, 1, ..., m-1.
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index c = 0; c < signal.outputs(); ++c) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < signal.size(); ++j) {
          sum += k(i, j) * signal.coefficients()(j, c);
        }
        out(start + i, c) = sum;
      }
    }
  }
  return out;
}

Signal sum_signals(std::span<const Signal> signals) {
  if (signals.empty()) throw Error(ErrorCode::InvalidArgument, "no signals to sum");
  const Signal& first = signals.front();
  Matrix total = first.coefficients();
  for (const Signal& s : signals.subspan(1)) {
    if (!(s.config() == first.config())) {
      throw Error(ErrorCode::IncompatibleSignals, "signals differ in alpha or gamma");
    }
    if (s.centers().rows() != first.centers().rows() || s.centers().cols() != first.centers().cols() ||
        s.centers() != first.centers()) {
      throw Error(ErrorCode::IncompatibleSignals, "signals have different center sets");
    }
    if (s.outputs() != first.outputs()) {
      throw Error(ErrorCode::IncompatibleSignals, "signals have different output counts");
    }
    total += s.coefficients();
  }
  Matrix fitted = first.fitted_values();
  for (const Signal& s : signals.subspan(1)) fitted += s.fitted_values();
  double residual = 0.0;
  for (const Signal& s : signals) residual += s.residual();
  return Signal(first.centers(), std::move(total), first.config(), std::move(fitted), residual);
}

Matrix one_hot(std::span<const int> class_index, int classes) {
  Matrix y = Matrix::Zero(static_cast<Eigen::Index>(class_index.size()), classes);
  for (std::size_t i = 0; i < class_index.size(); ++i) {
    const int c = class_index[i];
    if (c < 0 || c >= classes) throw Error(ErrorCode::InvalidArgument, "class index out of range");
    y(static_cast<Eigen::Index>(i), c) = 1.0;
  }
  return y;
}

}  // namespace datasignal
