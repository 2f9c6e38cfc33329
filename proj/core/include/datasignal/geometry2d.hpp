#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "datasignal/classifier.hpp"
#include "datasignal/kernel.hpp"

namespace datasignal::geo {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

using Polyline = std::vector<Point2>;

enum class ShapeKind { Disk, Diamond, Flower };

/// The three test sets on B = [-1,1]^2:
///   disk     |x| <= 0.6
///   diamond  |x1| + |x2| <= 0.7
///   flower   0.4 <= r <= 0.6 + 0.1 cos(4 theta)
struct Shape2D {
  ShapeKind kind = ShapeKind::Disk;

  bool contains(double x, double y) const;
  /// Boundary curves sampled with `samples` vertices each (closed).
  std::vector<Polyline> outline(int samples = 256) const;
  std::string name() const;
};

Shape2D shape_from_name(const std::string& name);

/// m x m regular grid on B with spacing h = 2/(m-1). Row k*m + l holds
/// (k h - 1, l h - 1).
struct Grid2D {
  int m = 0;
  Matrix points;
  double spacing() const { return 2.0 / (m - 1); }
};

Grid2D make_grid(int m);

/// y = 1 on points inside the shape (boundary inclusive), 0 outside.
Matrix characteristic_values(const Shape2D& shape, const Matrix& points);
LabeledPointSet characteristic_dataset(const Shape2D& shape, const Grid2D& grid);

/// Flips each 0/1 value independently with probability `rate`.
LabeledPointSet corrupt_labels(const LabeledPointSet& data, double rate, std::uint64_t seed);

/// `count` points uniform on B.
Matrix sample_uniform(int count, std::uint64_t seed);

struct LabeledSample {
  Matrix points;
  std::vector<int> labels;
};

/// Class l gets counts[l] draws from N(means[l], covariances[l]), sampled as
/// mean + L z with L the Cholesky factor.
LabeledSample gaussian_classes(const std::vector<Eigen::Vector2d>& means,
                               const std::vector<Eigen::Matrix2d>& covariances,
                               const std::vector<int>& counts, std::uint64_t seed);

/// A circle of radius `radius` (label 0) and a cross made of the two
/// diagonals of [-half_length, half_length]^2 (label 1).
struct CircleSegmentsParams {
  int circle_points = 48;
  int points_per_segment = 24;
  double radius = 0.6;
  double half_length = 0.75;
};

/// Non-canonical defaults for the two sampling densities k = 1, 2.
CircleSegmentsParams circle_segments_defaults(int k);
LabeledSample circle_segments(const CircleSegmentsParams& params);

/// Scalar samples on a regular lattice: value(i, j) sits at
/// (x0 + i*dx, y0 + j*dy), stored row by row in j.
struct Raster {
  int nx = 0;
  int ny = 0;
  double x0 = 0.0;
  double y0 = 0.0;
  double dx = 1.0;
  double dy = 1.0;
  std::vector<double> values;

  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
  Point2 node(int i, int j) const { return {x0 + i * dx, y0 + j * dy}; }
  double max() const;
  double min() const;
  /// nx*ny x 2 matrix of node coordinates in storage order.
  Matrix node_points() const;
};

/// Raster of cell centers of a resolution x resolution partition of B.
Raster box_raster(int resolution);

/// Column `output` of the signal evaluated on box_raster(resolution).
Raster field_on_grid(const Signal& signal, int resolution, Eigen::Index output = 0);

struct ContourSet {
  double level = 0.0;
  std::vector<Polyline> polylines;
  /// closed[i] implies polylines[i].front() == polylines[i].back().
  std::vector<bool> closed;

  bool empty() const { return polylines.empty(); }
  std::size_t vertex_count() const;
};

/// Marching squares with linear interpolation along cell edges. A node is
/// inside when value >= level. Saddle cells are resolved by comparing the
/// mean of the four corners with the level.
ContourSet extract_contour(const Raster& field, double level);

/// The zero level of u_0 - u_1 for a two-class model over B.
ContourSet decision_boundary_2d(const ClassifierModel& model, int resolution);

double polyline_length(const Polyline& line);
double total_length(const ContourSet& contours);

/// Even-odd point-in-polygon against the closed polylines of a contour set.
bool inside_closed(const ContourSet& contours, Point2 p);

double distance_to_contour(const ContourSet& contours, Point2 p);

/// Symmetric Hausdorff distance between the vertices of each set and the
/// segments of the other.
double hausdorff(const ContourSet& a, const ContourSet& b);

}  // namespace datasignal::geo
