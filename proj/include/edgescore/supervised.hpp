#pragma once

#include <vector>

#include "edgescore/raster.hpp"

namespace edgescore {

inline constexpr double kDefaultPrattAlpha = 1.0 / 9.0;

/// Nonempty list of nonempty ground-truth maps with identical dimensions.
class GroundTruthSet {
 public:
  explicit GroundTruthSet(std::vector<EdgeMap> maps);

  std::size_t size() const { return maps_.size(); }
  const std::vector<EdgeMap>& maps() const { return maps_; }
  const EdgeMap& operator[](std::size_t i) const { return maps_[i]; }
  int width() const { return maps_.front().width(); }
  int height() const { return maps_.front().height(); }

 private:
  std::vector<EdgeMap> maps_;
};

/// Exact Euclidean distance from every pixel to the nearest edge pixel.
class DistanceField {
 public:
  DistanceField(int width, int height, std::vector<double> distances);

  int width() const { return width_; }
  int height() const { return height_; }
  /// 1-based.
  double at(Cell cell) const {
    return distances_[static_cast<std::size_t>(cell.row - 1) * static_cast<std::size_t>(width_) +
                      static_cast<std::size_t>(cell.col - 1)];
  }
  const std::vector<double>& values() const { return distances_; }

 private:
  int width_;
  int height_;
  std::vector<double> distances_;
};

/// GT.b / (||GT|| ||b||) for binary vectors.
double cosine_discrepancy(const EdgeMap& map, const EdgeMap& ground_truth);

/// Max of cosine_discrepancy over the set.
double cosine_discrepancy_multi(const EdgeMap& map, const GroundTruthSet& set);

/// Separable exact squared-distance transform (lower envelope of parabolas),
/// square-rooted at the end. Throws EmptyMapError for an empty map.
DistanceField distance_transform(const EdgeMap& ground_truth);

/// Pratt's figure of merit: sum over detected pixels of 1/(1 + alpha d^2),
/// divided by max(#E_map, #E_gt).
double pratt_fom(const EdgeMap& map, const EdgeMap& ground_truth, double alpha = kDefaultPrattAlpha);

/// As above with a precomputed distance field of the ground truth.
double pratt_fom(const EdgeMap& map, const EdgeMap& ground_truth, const DistanceField& field,
                 double alpha = kDefaultPrattAlpha);

}  // namespace edgescore
