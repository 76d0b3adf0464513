#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include "edgescore/pattern_bank.hpp"
#include "edgescore/raster.hpp"

namespace edgescore {

struct SupervisedScores {
  double q_gt = 0.0;
  double pratt = 0.0;
};

/// Per-map bundle of scores and the detector parameters that produced it.
struct ScoreRecord {
  double q = 0.0;
  double H = 0.0;
  double C = 0.0;
  std::size_t edge_count = 0;
  /// Set for maps without edge pixels; all scores are then zero.
  bool degenerate = false;
  std::map<std::string, double> params;
  std::optional<SupervisedScores> supervised;
};

/// C = q * H. Empty maps yield a degenerate record with q = H = C = 0.
ScoreRecord complexity(const EdgeMap& map, const PatternBank& bank);

}  // namespace edgescore
