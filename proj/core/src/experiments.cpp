#include "datasignal/experiments.hpp"

#include "datasignal/io.hpp"

#include <algorithm>
#include <array>
#include <limits>

namespace datasignal::experiments {

namespace {

const std::array<std::string, 3> kShapes{"disk", "diamond", "flower"};
const std::array<std::string, 3> kNoise{"clean", "noise2", "noise5"};

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

void add_value_points(svg::Figure& fig, const LabeledPointSet& data) {
  svg::PointLayer zeros{svg::kMagenta, {}, 0.010};
  svg::PointLayer ones{svg::kBlue, {}, 0.010};
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    geo::Point2 p{data.points()(i, 0), data.points()(i, 1)};
    (data.values()(i, 0) >= 0.5 ? ones : zeros).points.push_back(p);
  }
  fig.points.push_back(std::move(zeros));
  fig.points.push_back(std::move(ones));
}

void add_level_lines(svg::Figure& fig, const Signal& signal, const std::vector<double>& fractions,
                     int resolution, Eigen::Index output = 0) {
  const geo::Raster field = geo::field_on_grid(signal, resolution, output);
  const double peak = field.max();
  for (std::size_t k = 0; k < fractions.size(); ++k) {
    svg::ContourLayer layer;
    layer.contours = geo::extract_contour(field, fractions[k] * peak);
    layer.color = fractions.size() == 1 ? "#000000" : svg::level_color(k, fractions.size());
    fig.contours.push_back(std::move(layer));
  }
}

svg::Figure shape_figure(const std::string& shape_name, const std::string& variant, double alpha,
                         std::uint64_t seed, int resolution, const std::vector<double>& fractions) {
  const geo::Shape2D shape = geo::shape_from_name(shape_name);
  LabeledPointSet data = [&] {
    if (variant == "sampled1024") {
      Matrix pts = geo::sample_uniform(1024, seed);
      Matrix vals = geo::characteristic_values(shape, pts);
      return LabeledPointSet(std::move(pts), std::move(vals));
    }
    const int m = starts_with(variant, "m16-") ? 16 : 32;
    LabeledPointSet clean = geo::characteristic_dataset(shape, geo::make_grid(m));
    const std::string noise = variant.substr(4);
    if (noise == "noise2") return geo::corrupt_labels(clean, 0.02, seed);
    if (noise == "noise5") return geo::corrupt_labels(clean, 0.05, seed);
    return clean;
  }();

  svg::Figure fig;
  fig.title = shape_name + "-" + variant + " alpha=" + format_double(alpha);
  fig.outlines.push_back(svg::outline_layer(shape.outline()));
  add_level_lines(fig, fit_signal(data, {1.0, alpha}), fractions, resolution);
  add_value_points(fig, data);
  return fig;
}

svg::Figure circle_segments_figure(int k, const std::string& which, double alpha, int resolution) {
  const geo::LabeledSample sample = geo::circle_segments(geo::circle_segments_defaults(k));
  std::vector<std::string> labels;
  for (int l : sample.labels) labels.push_back(l == 0 ? "circle" : "cross");
  const ClassifierModel model =
      fit_classifier(sample.points, labels, {1.0, alpha}, std::vector<std::string>{"circle", "cross"});

  svg::Figure fig;
  fig.title = "circle-segments-k" + std::to_string(k) + (which.empty() ? "" : "-" + which) +
              " alpha=" + format_double(alpha);
  if (which.empty()) {
    svg::ContourLayer layer;
    layer.contours = geo::decision_boundary_2d(model, resolution);
    fig.contours.push_back(std::move(layer));
  } else {
    add_level_lines(fig, model.signal(), {0.5}, resolution, which == "circle" ? 0 : 1);
  }
  svg::PointLayer circle{svg::class_color(0), {}, 0.012};
  svg::PointLayer cross{svg::class_color(1), {}, 0.012};
  for (Eigen::Index i = 0; i < sample.points.rows(); ++i) {
    (sample.labels[static_cast<std::size_t>(i)] == 0 ? circle : cross)
        .points.push_back({sample.points(i, 0), sample.points(i, 1)});
  }
  fig.points.push_back(std::move(circle));
  fig.points.push_back(std::move(cross));
  return fig;
}

svg::Figure gaussians_figure(double alpha, std::uint64_t seed, int resolution) {
  const std::vector<Eigen::Vector2d> means{{-0.4, -0.3}, {0.4, -0.3}, {0.0, 0.4}};
  std::vector<Eigen::Matrix2d> covs(3);
  covs[0] << 0.04, 0.0, 0.0, 0.02;
  covs[1] << 0.02, 0.0, 0.0, 0.05;
  covs[2] << 0.03, 0.0, 0.0, 0.03;
  const geo::LabeledSample sample = geo::gaussian_classes(means, covs, {80, 80, 80}, seed);
  std::vector<std::string> labels;
  for (int l : sample.labels) labels.push_back(std::to_string(l));
  const ClassifierModel model =
      fit_classifier(sample.points, labels, {1.0, alpha}, std::vector<std::string>{"0", "1", "2"});

  geo::Raster grid = geo::box_raster(resolution);
  const Matrix u = signal_values(model, grid.node_points());

  svg::Figure fig;
  fig.title = "gaussians alpha=" + format_double(alpha);
  // Region of class l: u_l - max_{k != l} u_k >= 0.
  for (int l = 0; l < 3; ++l) {
    geo::Raster margin = grid;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      double other = -std::numeric_limits<double>::infinity();
      for (int k = 0; k < 3; ++k) {
        if (k != l) other = std::max(other, u(i, k));
      }
      margin.values[static_cast<std::size_t>(i)] = u(i, l) - other;
    }
    svg::ContourLayer layer;
    layer.contours = geo::extract_contour(margin, 0.0);
    layer.color = svg::class_color(static_cast<std::size_t>(l));
    fig.contours.push_back(std::move(layer));
  }
  for (int l = 0; l < 3; ++l) {
    svg::PointLayer layer{svg::class_color(static_cast<std::size_t>(l)), {}, 0.012};
    for (Eigen::Index i = 0; i < sample.points.rows(); ++i) {
      if (sample.labels[static_cast<std::size_t>(i)] == l) {
        layer.points.push_back({sample.points(i, 0), sample.points(i, 1)});
      }
    }
    fig.points.push_back(std::move(layer));
  }
  svg::PointLayer centers{"#000000", {}, 0.035};
  for (const auto& m : means) centers.points.push_back({m.x(), m.y()});
  fig.points.push_back(std::move(centers));
  return fig;
}

}  // namespace

std::vector<std::string> figure_ids() {
  std::vector<std::string> ids;
  for (const auto& s : kShapes) {
    for (const char* m : {"m16", "m32"}) {
      for (const auto& n : kNoise) ids.push_back(s + "-" + m + "-" + n);
    }
    ids.push_back(s + "-sampled1024");
  }
  for (const char* k : {"k1", "k2"}) {
    const std::string base = std::string("circle-segments-") + k;
    ids.push_back(base);
    ids.push_back(base + "-circle");
    ids.push_back(base + "-cross");
  }
  ids.push_back("gaussians");
  return ids;
}

std::vector<double> level_fractions(const std::string& id) {
  if (id.find("noise") != std::string::npos || starts_with(id, "circle-segments")) return {0.5};
  return {0.2, 0.5, 0.8};
}

svg::Figure build_figure(const std::string& id, double alpha, std::uint64_t seed, int resolution) {
  const auto ids = figure_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
    throw Error(ErrorCode::InvalidArgument, "unknown experiment id '" + id + "'");
  }
  if (id == "gaussians") return gaussians_figure(alpha, seed, resolution);
  if (starts_with(id, "circle-segments-k")) {
    const int k = id[17] - '0';
    const std::string which = id.size() > 18 ? id.substr(19) : "";
    return circle_segments_figure(k, which, alpha, resolution);
  }
  const auto dash = id.find('-');
  return shape_figure(id.substr(0, dash), id.substr(dash + 1), alpha, seed, resolution,
                      level_fractions(id));
}

}  // namespace datasignal::experiments
