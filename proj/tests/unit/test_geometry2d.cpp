#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "datasignal/geometry2d.hpp"
#include "support/oracles.hpp"

using namespace datasignal;
using namespace datasignal::geo;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidArgument;
}

const Shape2D kDisk{ShapeKind::Disk};
const Shape2D kDiamond{ShapeKind::Diamond};
const Shape2D kFlower{ShapeKind::Flower};

Signal fit_shape(const Shape2D& shape, int m, double alpha) {
  return fit_signal(characteristic_dataset(shape, make_grid(m)), {1.0, alpha});
}

ContourSet fraction_contour(const Signal& s, int resolution, double fraction) {
  const Raster f = field_on_grid(s, resolution);
  return extract_contour(f, fraction * f.max());
}

std::vector<double> vertex_radii(const ContourSet& c) {
  std::vector<double> r;
  for (const auto& line : c.polylines) {
    for (const auto& p : line) r.push_back(std::hypot(p.x, p.y));
  }
  return r;
}

}  // namespace

TEST(Shapes, Membership) {
  EXPECT_TRUE(kDisk.contains(0.0, 0.0));
  EXPECT_TRUE(kDisk.contains(0.6, 0.0));
  EXPECT_FALSE(kDisk.contains(0.5, 0.5));
  EXPECT_TRUE(kDiamond.contains(0.35, 0.35));
  EXPECT_FALSE(kDiamond.contains(0.4, 0.4));
  EXPECT_FALSE(kFlower.contains(0.0, 0.0));
  EXPECT_TRUE(kFlower.contains(0.69, 0.0));
  EXPECT_FALSE(kFlower.contains(0.45, 0.45));
  EXPECT_EQ(shape_from_name("flower").kind, ShapeKind::Flower);
  EXPECT_EQ(code_of([] { shape_from_name("square"); }), ErrorCode::InvalidArgument);
}

TEST(Shapes, OutlinesAreClosedAndOnTheBoundary) {
  for (const Shape2D& s : {kDisk, kDiamond, kFlower}) {
    for (const auto& line : s.outline(64)) {
      ASSERT_GE(line.size(), 4u);
      EXPECT_EQ(line.front(), line.back()) << s.name();
    }
  }
  const auto disk = kDisk.outline(64);
  for (const auto& p : disk.front()) EXPECT_NEAR(std::hypot(p.x, p.y), 0.6, 1e-12);
}

TEST(Grid, LexicographicOrder) {
  const Grid2D g = make_grid(5);
  ASSERT_EQ(g.points.rows(), 25);
  EXPECT_DOUBLE_EQ(g.spacing(), 0.5);
  for (int k = 0; k < 5; ++k) {
    for (int l = 0; l < 5; ++l) {
      EXPECT_DOUBLE_EQ(g.points(k * 5 + l, 0), k * 0.5 - 1.0);
      EXPECT_DOUBLE_EQ(g.points(k * 5 + l, 1), l * 0.5 - 1.0);
    }
  }
  EXPECT_THROW(make_grid(1), Error);
}

TEST(CharacteristicDataset, CornersOfTheBoxAreOutsideTheDisk) {
  const auto data = characteristic_dataset(kDisk, make_grid(2));
  ASSERT_EQ(data.size(), 4);
  EXPECT_EQ(data.values().sum(), 0.0);
}

TEST(CharacteristicDataset, CenterIsInside) {
  const auto data = characteristic_dataset(kDisk, make_grid(5));
  EXPECT_EQ(data.values()(12, 0), 1.0);  // (0, 0)
}

TEST(CharacteristicDataset, CountMatchesDoubleLoop) {
  const int m = 16;
  int expected = 0;
  for (int k = 0; k < m; ++k) {
    for (int l = 0; l < m; ++l) {
      const double x = 2.0 * k / (m - 1) - 1.0;
      const double y = 2.0 * l / (m - 1) - 1.0;
      if (x * x + y * y <= 0.36) ++expected;
    }
  }
  const auto data = characteristic_dataset(kDisk, make_grid(m));
  EXPECT_EQ(data.size(), m * m);
  EXPECT_EQ(static_cast<int>(data.values().sum()), expected);
}

TEST(CorruptLabels, RateZeroAndOne) {
  const auto data = characteristic_dataset(kDiamond, make_grid(12));
  EXPECT_TRUE(corrupt_labels(data, 0.0, 9).values() == data.values());
  const Matrix flipped = corrupt_labels(data, 1.0, 9).values();
  EXPECT_TRUE(flipped == (Matrix::Ones(data.size(), 1) - data.values()));
  EXPECT_TRUE(corrupt_labels(data, 0.3, 4).points() == data.points());
}

TEST(CorruptLabels, FlipFractionStatistics) {
  const auto data = characteristic_dataset(kDisk, make_grid(32));
  const double n = static_cast<double>(data.size());
  const int seeds = 1000;
  double flips = 0.0;
  for (int s = 0; s < seeds; ++s) {
    flips += (corrupt_labels(data, 0.05, static_cast<std::uint64_t>(s)).values() - data.values()).cwiseAbs().sum();
  }
  const double mean = flips / (n * seeds);
  const double se = std::sqrt(0.05 * 0.95 / (n * seeds));
  EXPECT_NEAR(mean, 0.05, 3.0 * se);
}

TEST(CorruptLabels, SeededAndValidated) {
  const auto data = characteristic_dataset(kFlower, make_grid(16));
  EXPECT_TRUE(corrupt_labels(data, 0.1, 77).values() == corrupt_labels(data, 0.1, 77).values());
  EXPECT_FALSE(corrupt_labels(data, 0.1, 77).values() == corrupt_labels(data, 0.1, 78).values());
  EXPECT_EQ(code_of([&] { corrupt_labels(data, -0.1, 1); }), ErrorCode::InvalidRate);
  EXPECT_EQ(code_of([&] { corrupt_labels(data, 1.5, 1); }), ErrorCode::InvalidRate);
}

TEST(SampleUniform, InTheBoxWithCenteredMean) {
  const Matrix one = sample_uniform(1, 3);
  ASSERT_EQ(one.rows(), 1);
  EXPECT_LE(one.cwiseAbs().maxCoeff(), 1.0);
  const Matrix x = sample_uniform(1024, 5);
  EXPECT_LE(x.cwiseAbs().maxCoeff(), 1.0);
  const double sigma = std::sqrt(1.0 / 3.0) / std::sqrt(1024.0);
  EXPECT_NEAR(x.col(0).mean(), 0.0, 3.0 * sigma);
  EXPECT_NEAR(x.col(1).mean(), 0.0, 3.0 * sigma);
  EXPECT_TRUE(sample_uniform(1024, 5) == x);
}

TEST(GaussianClasses, MomentsAndCounts) {
  const auto s = gaussian_classes({Eigen::Vector2d(5, 5)}, {Eigen::Matrix2d::Identity()}, {1000}, 12);
  ASSERT_EQ(s.points.rows(), 1000);
  const double tol = 3.0 / std::sqrt(1000.0);
  EXPECT_NEAR(s.points.col(0).mean(), 5.0, tol);
  EXPECT_NEAR(s.points.col(1).mean(), 5.0, tol);

  const auto three = gaussian_classes({Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)},
                                      std::vector<Eigen::Matrix2d>(3, 0.01 * Eigen::Matrix2d::Identity()),
                                      {10, 20, 30}, 1);
  ASSERT_EQ(three.labels.size(), 60u);
  for (int l = 0; l < 3; ++l) EXPECT_EQ(std::count(three.labels.begin(), three.labels.end(), l), 10 * (l + 1));
}

TEST(GaussianClasses, RejectsSingularCovariance) {
  EXPECT_EQ(code_of([] {
              gaussian_classes({Eigen::Vector2d(0, 0)}, {Eigen::Matrix2d::Zero()}, {10}, 1);
            }),
            ErrorCode::NotSPD);
}

TEST(CircleSegments, LabelsAndGeometry) {
  for (int k : {1, 2}) {
    const auto p = circle_segments_defaults(k);
    const auto s = circle_segments(p);
    ASSERT_EQ(static_cast<int>(s.labels.size()), p.circle_points + 2 * p.points_per_segment);
    for (std::size_t i = 0; i < s.labels.size(); ++i) {
      const double x = s.points(static_cast<Eigen::Index>(i), 0);
      const double y = s.points(static_cast<Eigen::Index>(i), 1);
      if (s.labels[i] == 0) {
        EXPECT_NEAR(std::hypot(x, y), p.radius, 1e-12);
      } else {
        EXPECT_NEAR(std::min(std::abs(x - y), std::abs(x + y)), 0.0, 1e-12);
        EXPECT_LE(std::max(std::abs(x), std::abs(y)), p.half_length + 1e-12);
      }
    }
  }
}

TEST(FieldOnGrid, ZeroSignalIsZero) {
  const Signal s(Matrix::Zero(3, 2), Matrix::Zero(3, 1), KernelConfig{1.0, 1.0});
  const Raster f = field_on_grid(s, 16);
  EXPECT_EQ(f.max(), 0.0);
  EXPECT_EQ(f.min(), 0.0);
}

TEST(FieldOnGrid, PeakNearTheCenter) {
  const Signal s(Matrix::Zero(1, 2), Matrix::Ones(1, 1), KernelConfig{1.0, 0.0});
  const Raster f = field_on_grid(s, 33);
  const auto it = std::max_element(f.values.begin(), f.values.end());
  const auto idx = static_cast<int>(it - f.values.begin());
  const Point2 p = f.node(idx % f.nx, idx / f.nx);
  EXPECT_NEAR(p.x, 0.0, 1e-12);
  EXPECT_NEAR(p.y, 0.0, 1e-12);
}

TEST(FieldOnGrid, MatchesPointwiseEvaluation) {
  const Signal s = fit_shape(kFlower, 16, 0.5);
  const Raster f = field_on_grid(s, 40);
  ASSERT_EQ(f.nx, 40);
  ASSERT_EQ(f.ny, 40);
  EXPECT_NEAR(f.node(0, 0).x, -1.0 + 1.0 / 40, 1e-15);
  const Matrix nodes = f.node_points();
  for (int j = 0; j < f.ny; j += 3) {
    for (int i = 0; i < f.nx; i += 3) {
      const Eigen::Index row = j * f.nx + i;
      EXPECT_NEAR(f.at(i, j), oracle::direct_sum(s.centers(), s.coefficients(), 0, nodes, row), 1e-12);
    }
  }
  EXPECT_EQ(code_of([] {
              field_on_grid(Signal(Matrix::Zero(1, 3), Matrix::Ones(1, 1), KernelConfig{}), 8);
            }),
            ErrorCode::DimensionMismatch);
}

TEST(ExtractContour, LinearFieldOnOneCell) {
  Raster f{2, 2, 0.0, 0.0, 1.0, 1.0, {0.0, 1.0, 0.0, 1.0}};
  const ContourSet c = extract_contour(f, 0.5);
  ASSERT_EQ(c.polylines.size(), 1u);
  ASSERT_EQ(c.polylines[0].size(), 2u);
  EXPECT_FALSE(c.closed[0]);
  for (const auto& p : c.polylines[0]) EXPECT_DOUBLE_EQ(p.x, 0.5);
  EXPECT_NE(c.polylines[0][0].y, c.polylines[0][1].y);
}

TEST(ExtractContour, ConstantFieldHasNoContour) {
  Raster f{5, 4, 0.0, 0.0, 1.0, 1.0, std::vector<double>(20, 0.25)};
  EXPECT_TRUE(extract_contour(f, 0.3).empty());
  EXPECT_TRUE(extract_contour(f, 0.1).empty());
}

TEST(ExtractContour, SaddleUsesCellAverage) {
  // Diagonal corners high: average 0.5 >= 0.4 joins the high corners.
  Raster f{2, 2, 0.0, 0.0, 1.0, 1.0, {1.0, 0.0, 0.0, 1.0}};
  const ContourSet joined = extract_contour(f, 0.4);
  ASSERT_EQ(joined.polylines.size(), 2u);
  for (const auto& line : joined.polylines) {
    // Each segment cuts off one low corner: (1,0) or (0,1).
    const Point2 mid{(line[0].x + line[1].x) / 2, (line[0].y + line[1].y) / 2};
    EXPECT_GT(std::abs(mid.x - mid.y), 0.5);
  }
  const ContourSet split = extract_contour(f, 0.6);
  ASSERT_EQ(split.polylines.size(), 2u);
  for (const auto& line : split.polylines) {
    const Point2 mid{(line[0].x + line[1].x) / 2, (line[0].y + line[1].y) / 2};
    EXPECT_LT(std::abs(mid.x - mid.y), 0.5);  // cuts off a high corner
  }
}

TEST(ExtractContour, VerticesInterpolateTheLevel) {
  const Signal s = fit_shape(kDiamond, 16, 1.0);
  const Raster f = field_on_grid(s, 64);
  const double level = 0.5 * f.max();
  const ContourSet c = extract_contour(f, level);
  ASSERT_FALSE(c.empty());
  for (std::size_t k = 0; k < c.polylines.size(); ++k) {
    if (c.closed[k]) EXPECT_EQ(c.polylines[k].front(), c.polylines[k].back());
  }
  for (const auto& line : c.polylines) {
    for (const auto& p : line) {
      const double gi = (p.x - f.x0) / f.dx;
      const double gj = (p.y - f.y0) / f.dy;
      const bool on_vertical = std::abs(gi - std::round(gi)) < 1e-9;
      const bool on_horizontal = std::abs(gj - std::round(gj)) < 1e-9;
      EXPECT_TRUE(on_vertical || on_horizontal);
    }
  }
}

TEST(ExtractContour, DiskHalfLevelIsOneClosedCurve) {
  const ContourSet c = fraction_contour(fit_shape(kDisk, 32, 1.0), 256, 0.5);
  ASSERT_EQ(c.polylines.size(), 1u);
  EXPECT_TRUE(c.closed[0]);
  for (double r : vertex_radii(c)) {
    EXPECT_GE(r, 0.4);
    EXPECT_LE(r, 0.8);
  }
}

TEST(DecisionBoundary, SymmetricPairGivesTheMidline) {
  Matrix x(2, 2);
  x << -0.5, 0.0, 0.5, 0.0;
  const auto model = fit_classifier(x, {"a", "b"}, {1.0, 0.5});
  const int res = 64;
  const ContourSet c = decision_boundary_2d(model, res);
  ASSERT_FALSE(c.empty());
  for (const auto& line : c.polylines) {
    for (const auto& p : line) EXPECT_LE(std::abs(p.x), 2.0 / res);
  }
}

TEST(DecisionBoundary, ClassOrderDoesNotMatter) {
  const auto s = circle_segments(circle_segments_defaults(1));
  std::vector<std::string> labels;
  for (int l : s.labels) labels.push_back(l == 0 ? "circle" : "cross");
  const KernelConfig cfg{1.0, 1.0};
  const auto forward = fit_classifier(s.points, labels, cfg, std::vector<std::string>{"circle", "cross"});
  const auto backward = fit_classifier(s.points, labels, cfg, std::vector<std::string>{"cross", "circle"});
  const ContourSet a = decision_boundary_2d(forward, 96);
  const ContourSet b = decision_boundary_2d(backward, 96);
  EXPECT_LE(hausdorff(a, b), 1e-9);
  EXPECT_NEAR(total_length(a), total_length(b), 1e-9);
}

TEST(DecisionBoundary, SeparatesCircleFromCross) {
  {
    const int k = 1;
    const auto s = circle_segments(circle_segments_defaults(k));
    std::vector<std::string> labels;
    for (int l : s.labels) labels.push_back(l == 0 ? "circle" : "cross");
    const auto model = fit_classifier(s.points, labels, {1.0, 1.0});
    const int res = 256;
    const ContourSet boundary = decision_boundary_2d(model, res);
    ASSERT_FALSE(boundary.empty());
    const Matrix v = signal_values(model, s.points);
    const double cell = 2.0 / res;
    for (Eigen::Index i = 0; i < s.points.rows(); ++i) {
      const Point2 p{s.points(i, 0), s.points(i, 1)};
      if (distance_to_contour(boundary, p) <= cell * std::sqrt(2.0)) continue;
      const int own = s.labels[static_cast<std::size_t>(i)];
      EXPECT_GT(v(i, own), v(i, 1 - own)) << "k=" << k << " point " << i;
    }
  }
}

TEST(DecisionBoundary, NeedsTwoClasses) {
  Matrix x(3, 2);
  x << 0, 0, 1, 0, 0, 1;
  const auto model = fit_classifier(x, {"a", "b", "c"}, {1.0, 1.0});
  EXPECT_EQ(code_of([&] { decision_boundary_2d(model, 16); }), ErrorCode::WrongClassCount);
}

TEST(ContourProperties, HigherLevelsAreNested) {
  for (const Shape2D& shape : {kDisk, kDiamond}) {
    const Signal s = fit_shape(shape, 32, 1.0);
    const Raster f = field_on_grid(s, 128);
    const ContourSet lo = extract_contour(f, 0.2 * f.max());
    const ContourSet mid = extract_contour(f, 0.5 * f.max());
    const ContourSet hi = extract_contour(f, 0.8 * f.max());
    for (int j = 0; j < f.ny; j += 2) {
      for (int i = 0; i < f.nx; i += 2) {
        const Point2 p = f.node(i, j);
        if (inside_closed(hi, p)) EXPECT_TRUE(inside_closed(mid, p)) << shape.name();
        if (inside_closed(mid, p)) EXPECT_TRUE(inside_closed(lo, p)) << shape.name();
      }
    }
  }
}

TEST(ContourProperties, DiskContourIsRound) {
  const ContourSet c = fraction_contour(fit_shape(kDisk, 32, 1.0), 256, 0.5);
  const auto r = vertex_radii(c);
  ASSERT_FALSE(r.empty());
  double mean = 0.0;
  for (double v : r) mean += v;
  mean /= static_cast<double>(r.size());
  double var = 0.0;
  for (double v : r) var += (v - mean) * (v - mean);
  EXPECT_LE(std::sqrt(var / static_cast<double>(r.size())) / mean, 0.05);
}

TEST(ContourProperties, RegularizationShortensNoisyContours) {
  struct Case {
    Shape2D shape;
    int m;
    double rate;
  };
  for (const Case& c : {Case{kDiamond, 16, 0.02}, Case{kFlower, 16, 0.02}, Case{kDiamond, 32, 0.05},
                        Case{kFlower, 32, 0.05}}) {
    const auto data = corrupt_labels(characteristic_dataset(c.shape, make_grid(c.m)), c.rate, 0);
    const double smooth = total_length(fraction_contour(fit_signal(data, {1.0, 2.0}), 256, 0.5));
    const double rough = total_length(fraction_contour(fit_signal(data, {1.0, 0.1}), 256, 0.5));
    EXPECT_LE(smooth, rough) << c.shape.name() << " m=" << c.m;
  }
}

TEST(ContourProperties, StableUnderRefinement) {
  const Signal s = fit_shape(kDisk, 32, 1.0);
  const ContourSet coarse = fraction_contour(s, 128, 0.5);
  const ContourSet fine = fraction_contour(s, 256, 0.5);
  EXPECT_LE(hausdorff(coarse, fine), 2.0 / 128);
}

TEST(ContourHelpers, LengthsAndInsideTest) {
  ContourSet square;
  square.polylines.push_back({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}});
  square.closed.push_back(true);
  EXPECT_DOUBLE_EQ(total_length(square), 4.0);
  EXPECT_TRUE(inside_closed(square, {0.5, 0.5}));
  EXPECT_FALSE(inside_closed(square, {1.5, 0.5}));
  EXPECT_DOUBLE_EQ(distance_to_contour(square, {0.5, 2.0}), 1.0);
  EXPECT_EQ(hausdorff(square, square), 0.0);
}
