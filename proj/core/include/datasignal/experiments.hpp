#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "datasignal/svg.hpp"

namespace datasignal::experiments {

/// Figure ids:
///   <shape>-m16-<noise>, <shape>-m32-<noise>   shape: disk|diamond|flower,
///                                               noise: clean|noise2|noise5
///   <shape>-sampled1024
///   circle-segments-k1, circle-segments-k2      decision boundary
///   circle-segments-k1-circle, ...-cross        50% level of one class signal
///   gaussians
std::vector<std::string> figure_ids();

/// Level fractions drawn for a figure: 20/50/80% for clean and sampled data,
/// only 50% for the corrupted grids.
std::vector<double> level_fractions(const std::string& id);

/// Builds the figure for `id`. Unknown ids raise InvalidArgument.
svg::Figure build_figure(const std::string& id, double alpha, std::uint64_t seed,
                         int resolution = 256);

}  // namespace datasignal::experiments
