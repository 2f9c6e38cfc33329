#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "datasignal/kernel.hpp"
#include "support/oracles.hpp"

using namespace datasignal;

namespace {

const double kTwoPi = 2.0 * std::numbers::pi;

void expect_lambda_identity(const Signal& s, const LabeledPointSet& data) {
  const Matrix expected = data.values() - s.config().alpha * s.coefficients();
  EXPECT_LE(oracle::max_abs(s.fitted_values() - expected), 1e-10);
  EXPECT_LE(oracle::max_abs(evaluate_signal(s, data.points()) - expected), 1e-10);
}

void expect_residual_contract(const Signal& s, const LabeledPointSet& data) {
  Matrix a(data.size(), data.size());
  const auto g = oracle::gram(data.points(), s.config().gamma);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      a(i, j) = g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] + (i == j ? s.config().alpha : 0.0);
    }
  }
  const double tol = 1e-10 * std::max(1.0, oracle::max_abs(data.values()));
  EXPECT_LE(oracle::max_abs(a * s.coefficients() - data.values()), tol);
}

}  // namespace

TEST(LaplaceKernel, Examples) {
  EXPECT_EQ(laplace_kernel(0.0, {1.0, 0.0}), 1.0);
  EXPECT_DOUBLE_EQ(laplace_kernel(1.0, {1.0, 0.0}), std::exp(-kTwoPi));
  EXPECT_DOUBLE_EQ(laplace_kernel(2.0, {2.0, 0.0}), std::exp(-kTwoPi));
}

TEST(LaplaceKernel, StrictlyDecreasing) {
  double prev = laplace_kernel(0.0, {});
  for (double r = 0.01; r < 3.0; r += 0.01) {
    const double k = laplace_kernel(r, {});
    EXPECT_LT(k, prev);
    EXPECT_GT(k, 0.0);
    prev = k;
  }
}

TEST(KernelConfig, RejectsInvalid) {
  EXPECT_THROW((KernelConfig{0.0, 1.0}.validate()), Error);
  EXPECT_THROW((KernelConfig{1.0, -1e-3}.validate()), Error);
  EXPECT_THROW((KernelConfig{std::nan(""), 1.0}.validate()), Error);
  EXPECT_NO_THROW((KernelConfig{1.0, 0.0}.validate()));
}

TEST(NormalizingConstant, SmallDimensions) {
  EXPECT_NEAR(normalizing_constant_log(1), std::log(1.0 / std::numbers::pi), 1e-15);
  EXPECT_NEAR(normalizing_constant_log(2), std::log(2.0 / std::pow(std::numbers::pi, 1.5)), 1e-15);
}

TEST(NormalizingConstant, MnistDimensionAgainstLogSum) {
  const long double expected = oracle::log_normalizing_constant(784);
  const double got = normalizing_constant_log(784);
  EXPECT_LE(std::fabs((got - expected) / expected), 1e-10);
  EXPECT_THROW(normalizing_constant_log(0), Error);
}

TEST(BuildGram, TwoPoints) {
  Matrix x(2, 2);
  x << 0, 0, 1, 0;
  const Matrix g = build_gram(x, {});
  EXPECT_EQ(g(0, 0), 1.0);
  EXPECT_EQ(g(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(g(0, 1), std::exp(-kTwoPi));
  EXPECT_EQ(g(0, 1), g(1, 0));
}

TEST(BuildGram, SinglePoint) {
  Matrix x(1, 3);
  x << 0.2, -0.4, 7.0;
  const Matrix g = build_gram(x, {});
  ASSERT_EQ(g.rows(), 1);
  EXPECT_EQ(g(0, 0), 1.0);
}

TEST(BuildGram, MatchesScalarLoop) {
  std::mt19937_64 rng(11);
  const Matrix x = oracle::uniform_points(rng, 10, 5);
  const Matrix g = build_gram(x, {});
  const auto expected = oracle::gram(x);
  for (Eigen::Index i = 0; i < 10; ++i) {
    for (Eigen::Index j = 0; j < 10; ++j) {
      EXPECT_NEAR(g(i, j), expected[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], 1e-14);
    }
  }
}

TEST(BuildGram, SymmetricUnitDiagonalPositiveDefinite) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 8; ++trial) {
    const Eigen::Index m = 8 + 7 * trial;
    const Eigen::Index d = 1 + trial;
    const Matrix x = oracle::uniform_points(rng, m, d);
    const Matrix g = build_gram(x, {});
    EXPECT_TRUE(g.isApprox(g.transpose(), 0.0));
    EXPECT_TRUE((g.diagonal().array() == 1.0).all());
    EXPECT_TRUE((g.array() > 0.0).all() && (g.array() <= 1.0).all());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Eigen::MatrixXd(g), Eigen::EigenvaluesOnly);
    EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0) << "m=" << m << " d=" << d;
  }
}

TEST(FitSignal, SinglePoint) {
  Matrix x(1, 2);
  x << 0.3, 0.1;
  Matrix y(1, 1);
  y << 1.0;
  const LabeledPointSet data(x, y);
  const Signal s = fit_signal(data, {1.0, 1.0});
  EXPECT_DOUBLE_EQ(s.coefficients()(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(s.fitted_values()(0, 0), 0.5);
  expect_lambda_identity(s, data);
}

TEST(FitSignal, TwoPointSymmetry) {
  for (double r : {0.05, 0.3, 1.0}) {
    for (double alpha : {0.0, 0.1, 2.0}) {
      Matrix x(2, 3);
      x << 0, 0, 0, r, 0, 0;
      const LabeledPointSet data(x, Matrix::Ones(2, 1));
      const Signal s = fit_signal(data, {1.0, alpha});
      const double expected = 1.0 / (1.0 + alpha + std::exp(-kTwoPi * r));
      EXPECT_NEAR(s.coefficients()(0, 0), expected, 1e-14);
      EXPECT_NEAR(s.coefficients()(1, 0), expected, 1e-14);
      expect_lambda_identity(s, data);
    }
  }
}

TEST(FitSignal, NearExactInterpolation) {
  std::mt19937_64 rng(20);
  const Matrix x = oracle::uniform_points(rng, 20, 3);
  const Matrix y = oracle::uniform_points(rng, 20, 1);
  const LabeledPointSet data(x, y);
  const Signal s = fit_signal(data, {1.0, 1e-10});
  EXPECT_LE(oracle::max_abs(s.fitted_values() - y), 1e-6);
  const Matrix lambda = oracle::dense_solve(x, y, 1e-10);
  EXPECT_LE(oracle::max_abs(s.coefficients() - lambda), 1e-9 * oracle::max_abs(lambda));
  expect_residual_contract(s, data);
  expect_lambda_identity(s, data);
}

TEST(FitSignal, MatchesDenseSolveOracle) {
  std::mt19937_64 rng(3);
  for (Eigen::Index m : {5, 30, 100}) {
    for (double alpha : {0.0, 0.5, 3.0}) {
      const Matrix x = oracle::uniform_points(rng, m, 4);
      const Matrix y = oracle::uniform_points(rng, m, 2);
      const LabeledPointSet data(x, y);
      const Signal s = fit_signal(data, {1.0, alpha});
      const Matrix lambda = oracle::dense_solve(x, y, alpha);
      EXPECT_LE(oracle::max_abs(s.coefficients() - lambda), 1e-9 * oracle::max_abs(lambda));
      expect_residual_contract(s, data);
      expect_lambda_identity(s, data);
    }
  }
}

TEST(FitSignal, DuplicatePointsWithoutRegularizationAreSingular) {
  Matrix x(3, 2);
  x << 0, 0, 0.5, 0.5, 0, 0;
  const LabeledPointSet data(x, Matrix::Ones(3, 1));
  try {
    fit_signal(data, {1.0, 0.0});
    FAIL() << "expected SingularSystem";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularSystem);
  }
  // With alpha > 0 the same data is fine.
  const Signal s = fit_signal(data, {1.0, 0.5});
  expect_lambda_identity(s, data);
}

TEST(FitSignal, NonFiniteInputIsSingular) {
  Matrix x(2, 1);
  x << 0.0, std::numeric_limits<double>::infinity();
  const LabeledPointSet data(x, Matrix::Ones(2, 1));
  try {
    fit_signal(data, {1.0, 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularSystem);
  }
}

TEST(FitSignal, ValueRowsMustMatchPoints) {
  try {
    LabeledPointSet(Matrix::Zero(3, 2), Matrix::Ones(2, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(FitSignal, Deterministic) {
  std::mt19937_64 rng(8);
  const LabeledPointSet data(oracle::uniform_points(rng, 40, 2), oracle::uniform_points(rng, 40, 3));
  const Signal a = fit_signal(data, {1.0, 0.3});
  const Signal b = fit_signal(data, {1.0, 0.3});
  EXPECT_TRUE(a.coefficients() == b.coefficients());
}

TEST(FitSignal, RegularizationLimit) {
  std::mt19937_64 rng(21);
  const Matrix x = oracle::uniform_points(rng, 25, 2);
  const Matrix y = oracle::uniform_points(rng, 25, 1);
  const LabeledPointSet data(x, y);
  double prev = std::numeric_limits<double>::infinity();
  for (double alpha : {1.0, 1e-2, 1e-4, 1e-6}) {
    const Signal s = fit_signal(data, {1.0, alpha});
    const double err = oracle::max_abs(s.fitted_values() - y);
    EXPECT_LE(err, prev) << "alpha=" << alpha;
    prev = err;
  }
  EXPECT_LE(oracle::max_abs(fit_signal(data, {1.0, 1e-8}).fitted_values() - y), 1e-5);
}

TEST(FitSignal, LinearInValues) {
  std::mt19937_64 rng(4);
  const Matrix x = oracle::uniform_points(rng, 30, 3);
  const Matrix y1 = oracle::uniform_points(rng, 30, 1);
  const Matrix y2 = oracle::uniform_points(rng, 30, 1);
  const KernelConfig cfg{1.0, 0.7};
  const double a = 2.5;
  const double b = -0.75;
  const Matrix l1 = fit_signal({x, y1}, cfg).coefficients();
  const Matrix l2 = fit_signal({x, y2}, cfg).coefficients();
  const Matrix l = fit_signal({x, Matrix(a * y1 + b * y2)}, cfg).coefficients();
  EXPECT_LE(oracle::max_abs(l - (a * l1 + b * l2)), 1e-12);
}

TEST(FitSignal, RigidMotionInvariance) {
  std::mt19937_64 rng(9);
  const Matrix x = oracle::uniform_points(rng, 30, 3);
  const Matrix y = oracle::uniform_points(rng, 30, 1);
  const Matrix q = oracle::uniform_points(rng, 50, 3, -2.0, 2.0);
  const Eigen::Matrix3d rot =
      Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, -2, 0.5).normalized()).toRotationMatrix();
  const Eigen::RowVector3d shift(0.3, -4.0, 2.2);
  auto move = [&](const Matrix& p) {
    Matrix out = p * rot.transpose();
    out.rowwise() += shift;
    return out;
  };
  const KernelConfig cfg{1.0, 0.2};
  const Matrix u = evaluate_signal(fit_signal({x, y}, cfg), q);
  const Matrix v = evaluate_signal(fit_signal({move(x), y}, cfg), move(q));
  EXPECT_LE(oracle::max_abs(u - v), 1e-10);
}

TEST(FitSignal, BandwidthEquivalence) {
  std::mt19937_64 rng(13);
  const Matrix x = oracle::uniform_points(rng, 30, 2);
  const Matrix y = oracle::uniform_points(rng, 30, 1);
  const Matrix q = oracle::uniform_points(rng, 40, 2);
  const double gamma = 0.37;
  const Signal wide = fit_signal({x, y}, {gamma, 0.4});
  const Signal unit = fit_signal({Matrix(x / gamma), y}, {1.0, 0.4});
  EXPECT_LE(oracle::max_abs(wide.coefficients() - unit.coefficients()), 1e-12);
  EXPECT_LE(oracle::max_abs(evaluate_signal(wide, q) - evaluate_signal(unit, Matrix(q / gamma))), 1e-12);
}

TEST(EvaluateSignal, Examples) {
  Matrix c(1, 2);
  c << 0.5, -0.5;
  const Signal s(c, Matrix::Ones(1, 1), KernelConfig{1.0, 0.0});
  EXPECT_DOUBLE_EQ(evaluate_signal(s, c)(0, 0), 1.0);
  Matrix q(1, 2);
  q << 0.5, 0.5;
  EXPECT_DOUBLE_EQ(evaluate_signal(s, q)(0, 0), std::exp(-kTwoPi));
}

TEST(EvaluateSignal, CentersReproduceFittedValues) {
  std::mt19937_64 rng(17);
  const Matrix x = oracle::uniform_points(rng, 60, 4);
  const LabeledPointSet data(x, oracle::uniform_points(rng, 60, 2));
  const Signal s = fit_signal(data, {0.8, 0.25});
  EXPECT_LE(oracle::max_abs(evaluate_signal(s, x) - s.fitted_values()), 1e-10);
}

TEST(EvaluateSignal, MatchesDirectSum) {
  std::mt19937_64 rng(19);
  const Matrix x = oracle::uniform_points(rng, 30, 3);
  const Signal s = fit_signal({x, oracle::uniform_points(rng, 30, 1)}, {1.5, 0.5});
  const Matrix q = oracle::uniform_points(rng, 700, 3);  // spans more than one block
  const Matrix u = evaluate_signal(s, q);
  for (Eigen::Index i = 0; i < q.rows(); i += 37) {
    EXPECT_NEAR(u(i, 0), oracle::direct_sum(x, s.coefficients(), 0, q, i, 1.5), 1e-12);
  }
}

TEST(EvaluateSignal, DecaysAwayFromCenters) {
  std::mt19937_64 rng(23);
  const Matrix x = oracle::uniform_points(rng, 20, 2);
  const Signal s = fit_signal({x, Matrix::Ones(20, 1)}, {1.0, 1.0});
  double prev = std::numeric_limits<double>::infinity();
  for (double r : {2.0, 4.0, 8.0, 16.0}) {
    Matrix q(1, 2);
    q << r, r;
    const double u = std::abs(evaluate_signal(s, q)(0, 0));
    EXPECT_LT(u, prev);
    prev = u;
  }
  EXPECT_LT(prev, 1e-30);
}

TEST(EvaluateSignal, DimensionMismatch) {
  const Signal s(Matrix::Zero(2, 3) + Matrix::Identity(2, 3), Matrix::Ones(2, 1), KernelConfig{});
  try {
    evaluate_signal(s, Matrix::Zero(4, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
  EXPECT_EQ(evaluate_signal(s, Matrix(0, 3)).rows(), 0);
}

TEST(SumSignals, SingleSignalIsItself) {
  std::mt19937_64 rng(29);
  const Signal s = fit_signal({oracle::uniform_points(rng, 10, 2), Matrix::Ones(10, 1)}, {1.0, 1.0});
  const std::vector<Signal> one{s};
  const Signal t = sum_signals(one);
  EXPECT_TRUE(t.coefficients() == s.coefficients());
  EXPECT_TRUE(t.centers() == s.centers());
}

TEST(SumSignals, OneVsRestColumnsAddUpToAllOnesFit) {
  std::mt19937_64 rng(31);
  const Matrix x = oracle::uniform_points(rng, 45, 2);
  std::vector<int> cls;
  for (int i = 0; i < 45; ++i) cls.push_back(i % 3);
  const Matrix y = one_hot(cls, 3);
  const KernelConfig cfg{1.0, 0.5};
  std::vector<Signal> per_class;
  for (int l = 0; l < 3; ++l) per_class.push_back(fit_signal({x, Matrix(y.col(l))}, cfg));
  const Signal total = sum_signals(per_class);
  const Signal ones = fit_signal({x, Matrix::Ones(45, 1)}, cfg);
  EXPECT_LE(oracle::max_abs(total.coefficients() - ones.coefficients()), 1e-12);
  const Matrix q = oracle::uniform_points(rng, 30, 2);
  EXPECT_LE(oracle::max_abs(evaluate_signal(total, q) - evaluate_signal(ones, q)), 1e-12);
}

TEST(SumSignals, DifferentCentersAreIncompatible) {
  std::mt19937_64 rng(37);
  const Signal a = fit_signal({oracle::uniform_points(rng, 10, 2), Matrix::Ones(10, 1)}, {1.0, 1.0});
  const Signal b = fit_signal({oracle::uniform_points(rng, 10, 2), Matrix::Ones(10, 1)}, {1.0, 1.0});
  const Signal c = fit_signal({a.centers(), Matrix::Ones(10, 1)}, {1.0, 2.0});
  for (const auto& pair : {std::vector<Signal>{a, b}, std::vector<Signal>{a, c}}) {
    try {
      sum_signals(pair);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::IncompatibleSignals);
    }
  }
}

TEST(SumSignals, SignalsOfDisjointSetsAreNotAdditive) {
  // u_{X1} + u_{X2} differs from u_{X1 u X2}: the sum is taken over
  // different systems, which is why sum_signals refuses different centers.
  Matrix x(4, 1);
  x << 0.0, 0.1, 0.2, 0.3;
  const KernelConfig cfg{1.0, 0.5};
  const Signal joint = fit_signal({x, Matrix::Ones(4, 1)}, cfg);
  const Signal first = fit_signal({Matrix(x.topRows(2)), Matrix::Ones(2, 1)}, cfg);
  const Signal second = fit_signal({Matrix(x.bottomRows(2)), Matrix::Ones(2, 1)}, cfg);
  Matrix q(1, 1);
  q << 0.15;
  const double separate = evaluate_signal(first, q)(0, 0) + evaluate_signal(second, q)(0, 0);
  EXPECT_GT(std::abs(separate - evaluate_signal(joint, q)(0, 0)), 1e-3);
}
