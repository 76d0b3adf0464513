#pragma once

#include <span>
#include <vector>

#include "edgescore/raster.hpp"

namespace edgescore {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2&) const = default;
};

/// Nonempty sample of points in the closed unit square.
class SampleSet {
 public:
  /// Throws EmptyMapError for no points, InvalidArgument for a point outside [0,1]^2.
  explicit SampleSet(std::vector<Point2> points);

  std::size_t size() const { return points_.size(); }
  const std::vector<Point2>& points() const { return points_; }

 private:
  std::vector<Point2> points_;
};

struct KsResult {
  /// sup |F_b - F| over the plane, in [0, 1].
  double statistic = 0.0;
  /// Corner where the supremum is attained (possibly as a left limit).
  Point2 argmax;
};

/// Pixel (i, j) maps to ((i - 1/2)/height, (j - 1/2)/width).
SampleSet map_to_unit_square(std::span<const Cell> edges, int height, int width);

/// Evaluates |F_b - x*y| on every corner in {xs, xs^-, 1} x {ys, ys^-, 1},
/// where the minus superscript marks a left limit. O(n^3); reference only.
KsResult ks_bruteforce(const SampleSet& sample);

/// Same supremum as ks_bruteforce via one sweep over the distinct x coordinates
/// with running y-rank counts. O(n log n + nx * ny).
KsResult ks_statistic(const SampleSet& sample);

/// 1 - D of the map's edge pixels. Throws EmptyMapError for an empty map.
double entropy(const EdgeMap& map);

}  // namespace edgescore
