#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "datasignal/geometry2d.hpp"

namespace datasignal::svg {

struct PointLayer {
  std::string color;
  std::vector<geo::Point2> points;
  double radius = 0.012;
};

struct ContourLayer {
  geo::ContourSet contours;
  std::string color = "#000000";
  double width = 0.008;
  bool dashed = false;
};

/// Layers are drawn in order: outlines, contours, then points on top.
struct Figure {
  std::string title;
  std::vector<ContourLayer> outlines;
  std::vector<ContourLayer> contours;
  std::vector<PointLayer> points;
};

/// Colors used by the experiments: value 1 is blue, value 0 magenta.
inline constexpr const char* kBlue = "#1f4fd8";
inline constexpr const char* kMagenta = "#d11fb4";
const std::string& class_color(std::size_t index);
/// Darker grays for higher of `count` nested levels.
std::string level_color(std::size_t index, std::size_t count);

ContourLayer outline_layer(const std::vector<geo::Polyline>& curves);

/// Standalone SVG 1.1 document with viewBox [-1.1, 1.1]^2 and y pointing up.
/// Each contour layer becomes exactly one <path>. Coordinates are printed
/// with four decimals so output is byte-stable.
std::string render(const Figure& figure);
void emit_svg(const Figure& figure, const std::filesystem::path& path);

}  // namespace datasignal::svg
