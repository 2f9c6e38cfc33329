#include "datasignal/geometry2d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <unordered_map>

namespace datasignal::geo {

namespace {

constexpr double kPi = std::numbers::pi;

double flower_outer_radius(double theta) { return 0.6 + 0.1 * std::cos(4.0 * theta); }

Polyline circle(double radius, int samples) {
  Polyline line;
  for (int i = 0; i <= samples; ++i) {
    const double t = 2.0 * kPi * (i % samples) / samples;
    line.push_back({radius * std::cos(t), radius * std::sin(t)});
  }
  return line;
}

// Uniform double in [0, 1) from the top 53 bits of one generator draw.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double segment_distance(Point2 p, Point2 a, Point2 b) {
  const double vx = b.x - a.x;
  const double vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0.0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

}  // namespace

bool Shape2D::contains(double x, double y) const {
  switch (kind) {
    case ShapeKind::Disk:
      return std::hypot(x, y) <= 0.6;
    case ShapeKind::Diamond:
      return std::abs(x) + std::abs(y) <= 0.7;
    case ShapeKind::Flower: {
      const double r = std::hypot(x, y);
      return r >= 0.4 && r <= flower_outer_radius(std::atan2(y, x));
    }
  }
  return false;
}

std::vector<Polyline> Shape2D::outline(int samples) const {
  switch (kind) {
    case ShapeKind::Disk:
      return {circle(0.6, samples)};
    case ShapeKind::Diamond:
      return {Polyline{{0.7, 0.0}, {0.0, 0.7}, {-0.7, 0.0}, {0.0, -0.7}, {0.7, 0.0}}};
    case ShapeKind::Flower: {
      Polyline outer;
      for (int i = 0; i <= samples; ++i) {
        const double t = 2.0 * kPi * (i % samples) / samples;
        const double r = flower_outer_radius(t);
        outer.push_back({r * std::cos(t), r * std::sin(t)});
      }
      return {outer, circle(0.4, samples)};
    }
  }
  return {};
}

std::string Shape2D::name() const {
  switch (kind) {
    case ShapeKind::Disk: return "disk";
    case ShapeKind::Diamond: return "diamond";
    case ShapeKind::Flower: return "flower";
  }
  return "?";
}

Shape2D shape_from_name(const std::string& name) {
  if (name == "disk") return {ShapeKind::Disk};
  if (name == "diamond") return {ShapeKind::Diamond};
  if (name == "flower") return {ShapeKind::Flower};
  throw Error(ErrorCode::InvalidArgument, "unknown shape '" + name + "'");
}

Grid2D make_grid(int m) {
  if (m < 2) throw Error(ErrorCode::InvalidArgument, "grid side count must be >= 2");
  Grid2D grid;
  grid.m = m;
  grid.points.resize(static_cast<Eigen::Index>(m) * m, 2);
  const double h = grid.spacing();
  for (int k = 0; k < m; ++k) {
    for (int l = 0; l < m; ++l) {
      const Eigen::Index row = static_cast<Eigen::Index>(k) * m + l;
      grid.points(row, 0) = k * h - 1.0;
      grid.points(row, 1) = l * h - 1.0;
    }
  }
  return grid;
}

Matrix characteristic_values(const Shape2D& shape, const Matrix& points) {
  if (points.cols() != 2) throw Error(ErrorCode::DimensionMismatch, "expected 2D points");
  Matrix values(points.rows(), 1);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    values(i, 0) = shape.contains(points(i, 0), points(i, 1)) ? 1.0 : 0.0;
  }
  return values;
}

LabeledPointSet characteristic_dataset(const Shape2D& shape, const Grid2D& grid) {
  return LabeledPointSet(grid.points, characteristic_values(shape, grid.points));
}

LabeledPointSet corrupt_labels(const LabeledPointSet& data, double rate, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw Error(ErrorCode::InvalidRate, "corruption rate must lie in [0, 1]");
  }
  Matrix values = data.values();
  if (!(values.array() == 0.0 || values.array() == 1.0).all()) {
    throw Error(ErrorCode::InvalidArgument, "label corruption needs binary 0/1 values");
  }
  std::mt19937_64 rng(seed);
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (unit_draw(rng) < rate) values(i, j) = 1.0 - values(i, j);
    }
  }
  return LabeledPointSet(data.points(), std::move(values));
}

Matrix sample_uniform(int count, std::uint64_t seed) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "sample count must be >= 1");
  std::mt19937_64 rng(seed);
  Matrix points(count, 2);
  for (int i = 0; i < count; ++i) {
    points(i, 0) = 2.0 * unit_draw(rng) - 1.0;
    points(i, 1) = 2.0 * unit_draw(rng) - 1.0;
  }
  return points;
}

LabeledSample gaussian_classes(const std::vector<Eigen::Vector2d>& means,
                               const std::vector<Eigen::Matrix2d>& covariances,
                               const std::vector<int>& counts, std::uint64_t seed) {
  if (means.size() != covariances.size() || means.size() != counts.size()) {
    throw Error(ErrorCode::DimensionMismatch, "means, covariances and counts must align");
  }
  std::vector<Eigen::Matrix2d> factors;
  for (const auto& cov : covariances) {
    if (!cov.allFinite() || std::abs(cov(0, 1) - cov(1, 0)) > 1e-12 * cov.cwiseAbs().maxCoeff()) {
      throw Error(ErrorCode::NotSPD, "covariance must be finite and symmetric");
    }
    Eigen::LLT<Eigen::Matrix2d> llt(cov);
    if (llt.info() != Eigen::Success || !(llt.matrixL().toDenseMatrix().diagonal().array() > 0.0).all()) {
      throw Error(ErrorCode::NotSPD, "covariance is not positive definite");
    }
    factors.push_back(llt.matrixL());
  }
  int total = 0;
  for (int c : counts) {
    if (c < 0) throw Error(ErrorCode::InvalidArgument, "negative class count");
    total += c;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  LabeledSample out;
  out.points.resize(total, 2);
  Eigen::Index row = 0;
  for (std::size_t l = 0; l < means.size(); ++l) {
    for (int i = 0; i < counts[l]; ++i) {
      const double z0 = normal(rng);
      const double z1 = normal(rng);
      const Eigen::Vector2d p = means[l] + factors[l] * Eigen::Vector2d(z0, z1);
      out.points.row(row++) = p.transpose();
      out.labels.push_back(static_cast<int>(l));
    }
  }
  return out;
}

CircleSegmentsParams circle_segments_defaults(int k) {
  switch (k) {
    case 1: return {48, 24, 0.6, 0.75};
    case 2: return {96, 12, 0.6, 0.75};
    default: throw Error(ErrorCode::InvalidArgument, "circle/segments density index must be 1 or 2");
  }
}

LabeledSample circle_segments(const CircleSegmentsParams& params) {
  if (params.circle_points < 1 || params.points_per_segment < 1) {
    throw Error(ErrorCode::InvalidArgument, "circle/segments counts must be positive");
  }
  LabeledSample out;
  out.points.resize(params.circle_points + 2 * params.points_per_segment, 2);
  Eigen::Index row = 0;
  for (int i = 0; i < params.circle_points; ++i) {
    const double t = 2.0 * kPi * (i + 0.5) / params.circle_points;
    out.points.row(row++) << params.radius * std::cos(t), params.radius * std::sin(t);
    out.labels.push_back(0);
  }
  // Midpoint parameters keep the two diagonals from sharing the origin.
  for (int diag = 0; diag < 2; ++diag) {
    const double sy = diag == 0 ? 1.0 : -1.0;
    for (int i = 0; i < params.points_per_segment; ++i) {
      const double t = -1.0 + (2.0 * i + 1.0) / params.points_per_segment;
      out.points.row(row++) << t * params.half_length, sy * t * params.half_length;
      out.labels.push_back(1);
    }
  }
  return out;
}

double Raster::max() const { return *std::max_element(values.begin(), values.end()); }
double Raster::min() const { return *std::min_element(values.begin(), values.end()); }

Matrix Raster::node_points() const {
  Matrix pts(static_cast<Eigen::Index>(nx) * ny, 2);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Eigen::Index row = static_cast<Eigen::Index>(j) * nx + i;
      pts(row, 0) = x0 + i * dx;
      pts(row, 1) = y0 + j * dy;
    }
  }
  return pts;
}

Raster box_raster(int resolution) {
  if (resolution < 2) throw Error(ErrorCode::InvalidArgument, "raster resolution must be >= 2");
  Raster r;
  r.nx = r.ny = resolution;
  r.dx = r.dy = 2.0 / resolution;
  r.x0 = r.y0 = -1.0 + 0.5 * r.dx;
  r.values.assign(static_cast<std::size_t>(resolution) * resolution, 0.0);
  return r;
}

Raster field_on_grid(const Signal& signal, int resolution, Eigen::Index output) {
  if (signal.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "field_on_grid needs a 2D signal");
  if (output < 0 || output >= signal.outputs()) {
    throw Error(ErrorCode::DimensionMismatch, "signal output index out of range");
  }
  Raster r = box_raster(resolution);
  const Matrix u = evaluate_signal(signal, r.node_points());
  for (Eigen::Index i = 0; i < u.rows(); ++i) r.values[static_cast<std::size_t>(i)] = u(i, output);
  return r;
}

std::size_t ContourSet::vertex_count() const {
  std::size_t n = 0;
  for (const auto& p : polylines) n += p.size();
  return n;
}

ContourSet extract_contour(const Raster& field, double level) {
  ContourSet out;
  out.level = level;
  const int nx = field.nx;
  const int ny = field.ny;
  if (nx < 2 || ny < 2) return out;

  // Edge ids: 2*(j*nx+i) is the horizontal edge (i,j)-(i+1,j),
  // 2*(j*nx+i)+1 the vertical edge (i,j)-(i,j+1).
  auto h_edge = [nx](int i, int j) { return 2L * (static_cast<long>(j) * nx + i); };
  auto v_edge = [nx](int i, int j) { return 2L * (static_cast<long>(j) * nx + i) + 1; };
  auto edge_point = [&](long id) -> Point2 {
    const long node = id / 2;
    const int i = static_cast<int>(node % nx);
    const int j = static_cast<int>(node / nx);
    const int i2 = (id % 2 == 0) ? i + 1 : i;
    const int j2 = (id % 2 == 0) ? j : j + 1;
    const double a = field.at(i, j);
    const double b = field.at(i2, j2);
    const double t = (a == b) ? 0.5 : std::clamp((level - a) / (b - a), 0.0, 1.0);
    const Point2 pa = field.node(i, j);
    const Point2 pb = field.node(i2, j2);
    return {pa.x + t * (pb.x - pa.x), pa.y + t * (pb.y - pa.y)};
  };

  std::vector<std::array<long, 2>> segments;
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const double v00 = field.at(i, j);
      const double v10 = field.at(i + 1, j);
      const double v11 = field.at(i + 1, j + 1);
      const double v01 = field.at(i, j + 1);
      const int code = (v00 >= level ? 1 : 0) | (v10 >= level ? 2 : 0) | (v11 >= level ? 4 : 0) |
                       (v01 >= level ? 8 : 0);
      if (code == 0 || code == 15) continue;
      const long bottom = h_edge(i, j);
      const long right = v_edge(i + 1, j);
      const long top = h_edge(i, j + 1);
      const long left = v_edge(i, j);
      const bool center_inside = 0.25 * (v00 + v10 + v11 + v01) >= level;
      auto add = [&](long a, long b) { segments.push_back({a, b}); };
      switch (code) {
        case 1: case 14: add(left, bottom); break;
        case 2: case 13: add(bottom, right); break;
        case 3: case 12: add(left, right); break;
        case 4: case 11: add(right, top); break;
        case 6: case 9: add(bottom, top); break;
        case 7: case 8: add(left, top); break;
        case 5:
          if (center_inside) { add(bottom, right); add(top, left); }
          else { add(left, bottom); add(right, top); }
          break;
        case 10:
          if (center_inside) { add(left, bottom); add(right, top); }
          else { add(bottom, right); add(top, left); }
          break;
        default: break;
      }
    }
  }

  std::unordered_map<long, std::vector<std::size_t>> by_edge;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    by_edge[segments[s][0]].push_back(s);
    by_edge[segments[s][1]].push_back(s);
  }
  std::vector<bool> used(segments.size(), false);

  auto trace = [&](std::size_t start_seg, long start_edge) {
    std::vector<long> chain{start_edge};
    std::size_t seg = start_seg;
    long edge = start_edge;
    while (true) {
      used[seg] = true;
      edge = segments[seg][0] == edge ? segments[seg][1] : segments[seg][0];
      chain.push_back(edge);
      const auto& touching = by_edge[edge];
      std::size_t next = segments.size();
      for (std::size_t cand : touching) {
        if (!used[cand]) { next = cand; break; }
      }
      if (next == segments.size()) break;
      seg = next;
    }
    Polyline line;
    line.reserve(chain.size());
    for (long e : chain) line.push_back(edge_point(e));
    const bool closed = chain.size() > 2 && chain.front() == chain.back();
    if (closed) line.back() = line.front();
    out.polylines.push_back(std::move(line));
    out.closed.push_back(closed);
  };

  // Open chains start at edges touched once (raster border); walk those first
  // in a fixed order so the output is deterministic.
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    for (long e : segments[s]) {
      if (!used[s] && by_edge[e].size() == 1) trace(s, e);
    }
  }
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (!used[s]) trace(s, segments[s][0]);
  }
  return out;
}

ContourSet decision_boundary_2d(const ClassifierModel& model, int resolution) {
  if (model.classes() != 2) {
    throw Error(ErrorCode::WrongClassCount, "decision_boundary_2d needs exactly two classes");
  }
  if (model.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "decision_boundary_2d needs 2D data");
  Raster r = box_raster(resolution);
  const Matrix u = signal_values(model, r.node_points());
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    r.values[static_cast<std::size_t>(i)] = u(i, 0) - u(i, 1);
  }
  return extract_contour(r, 0.0);
}

double polyline_length(const Polyline& line) {
  double len = 0.0;
  for (std::size_t i = 1; i < line.size(); ++i) {
    len += std::hypot(line[i].x - line[i - 1].x, line[i].y - line[i - 1].y);
  }
  return len;
}

double total_length(const ContourSet& contours) {
  double len = 0.0;
  for (const auto& p : contours.polylines) len += polyline_length(p);
  return len;
}

bool inside_closed(const ContourSet& contours, Point2 p) {
  bool inside = false;
  for (std::size_t k = 0; k < contours.polylines.size(); ++k) {
    if (!contours.closed[k]) continue;
    const Polyline& poly = contours.polylines[k];
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
      const Point2 a = poly[i];
      const Point2 b = poly[j];
      if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) {
        inside = !inside;
      }
    }
  }
  return inside;
}

double distance_to_contour(const ContourSet& contours, Point2 p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& line : contours.polylines) {
    if (line.size() == 1) best = std::min(best, std::hypot(p.x - line[0].x, p.y - line[0].y));
    for (std::size_t i = 1; i < line.size(); ++i) {
      best = std::min(best, segment_distance(p, line[i - 1], line[i]));
    }
  }
  return best;
}

double hausdorff(const ContourSet& a, const ContourSet& b) {
  double worst = 0.0;
  for (const auto& line : a.polylines) {
    for (const Point2& p : line) worst = std::max(worst, distance_to_contour(b, p));
  }
  for (const auto& line : b.polylines) {
    for (const Point2& p : line) worst = std::max(worst, distance_to_contour(a, p));
  }
  return worst;
}

}  // namespace datasignal::geo
