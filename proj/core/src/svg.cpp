#include "datasignal/svg.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace datasignal::svg {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  std::string s(buf);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void write_path(std::ostream& out, const ContourLayer& layer) {
  out << "    <path fill=\"none\" stroke=\"" << layer.color << "\" stroke-width=\"" << num(layer.width)
      << "\"";
  if (layer.dashed) out << " stroke-dasharray=\"0.03 0.02\"";
  out << " d=\"";
  bool first = true;
  for (std::size_t k = 0; k < layer.contours.polylines.size(); ++k) {
    const auto& line = layer.contours.polylines[k];
    if (line.empty()) continue;
    const bool closed = k < layer.contours.closed.size() && layer.contours.closed[k];
    const std::size_t n = closed ? line.size() - 1 : line.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (!first) out << ' ';
      first = false;
      out << (i == 0 ? 'M' : 'L') << num(line[i].x) << ',' << num(line[i].y);
    }
    if (closed) out << " Z";
  }
  out << "\"/>\n";
}

}  // namespace

const std::string& class_color(std::size_t index) {
  static const std::array<std::string, 6> palette{kMagenta, kBlue, "#2ca02c",
                                                  "#ff7f0e", "#8c564b", "#17becf"};
  return palette[index % palette.size()];
}

std::string level_color(std::size_t index, std::size_t count) {
  // Lightest gray for the lowest level, black for the highest.
  const int shade = count <= 1 ? 0 : static_cast<int>(160.0 * (count - 1 - index) / (count - 1));
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", shade, shade, shade);
  return buf;
}

ContourLayer outline_layer(const std::vector<geo::Polyline>& curves) {
  ContourLayer layer;
  layer.contours.polylines = curves;
  for (const auto& c : curves) layer.contours.closed.push_back(c.size() > 2 && c.front() == c.back());
  layer.color = "#000000";
  layer.width = 0.006;
  layer.dashed = true;
  return layer;
}

std::string render(const Figure& figure) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"480\" height=\"480\" "
         "viewBox=\"-1.1 -1.1 2.2 2.2\">\n";
  if (!figure.title.empty()) out << "  <title>" << escape(figure.title) << "</title>\n";
  out << "  <rect x=\"-1.1\" y=\"-1.1\" width=\"2.2\" height=\"2.2\" fill=\"#ffffff\"/>\n";
  // Axes: the box B with ticks at -1, 0, 1.
  out << "  <g id=\"axes\" stroke=\"#888888\" stroke-width=\"0.004\" fill=\"none\">\n"
      << "    <rect x=\"-1\" y=\"-1\" width=\"2\" height=\"2\"/>\n";
  for (double t : {-1.0, 0.0, 1.0}) {
    out << "    <line x1=\"" << num(t) << "\" y1=\"1.0000\" x2=\"" << num(t) << "\" y2=\"1.0300\"/>\n";
    out << "    <line x1=\"-1.0300\" y1=\"" << num(t) << "\" x2=\"-1.0000\" y2=\"" << num(t) << "\"/>\n";
  }
  out << "  </g>\n";
  out << "  <g id=\"tick-labels\" font-family=\"sans-serif\" font-size=\"0.045\" fill=\"#444444\">\n";
  for (double t : {-1.0, 0.0, 1.0}) {
    out << "    <text x=\"" << num(t) << "\" y=\"1.0800\" text-anchor=\"middle\">" << t << "</text>\n";
    out << "    <text x=\"-1.0400\" y=\"" << num(-t + 0.015) << "\" text-anchor=\"end\">" << t << "</text>\n";
  }
  out << "  </g>\n";

  out << "  <g id=\"data\" transform=\"scale(1,-1)\">\n";
  for (const auto& layer : figure.outlines) write_path(out, layer);
  for (const auto& layer : figure.contours) write_path(out, layer);
  for (const auto& layer : figure.points) {
    out << "    <g fill=\"" << layer.color << "\">\n";
    for (const auto& p : layer.points) {
      out << "      <circle cx=\"" << num(p.x) << "\" cy=\"" << num(p.y) << "\" r=\"" << num(layer.radius)
          << "\"/>\n";
    }
    out << "    </g>\n";
  }
  out << "  </g>\n</svg>\n";
  return out.str();
}

void emit_svg(const Figure& figure, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << render(figure);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace datasignal::svg
