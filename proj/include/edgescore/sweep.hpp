#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edgescore/complexity.hpp"
#include "edgescore/detectors.hpp"
#include "edgescore/supervised.hpp"

namespace edgescore {

/// Values taken by one detector parameter, strictly increasing.
struct GridSpec {
  std::string parameter;
  std::vector<double> values;

  /// `count` points from `lo` to `hi` inclusive.
  static GridSpec linear(std::string parameter, int count, double lo, double hi);
  /// {0.01, 0.02, ..., 0.99, 0.999}.
  static GridSpec unit_thresholds(std::string parameter);
  /// "name:count:min:max".
  static GridSpec parse(std::string_view text);
};

struct Supervision {
  GroundTruthSet ground_truths;
  double alpha = kDefaultPrattAlpha;
};

struct SweepConfig {
  /// Fixed parameters; the swept one is overwritten per grid point.
  DetectorSpec detector;
  GridSpec grid;
  /// Canny only: lt = lt_ratio * ht when the grid sweeps ht.
  double lt_ratio = 0.4;
  int window = 7;
  std::optional<Supervision> supervision;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;

  /// Throws InvalidArgument for an unusable configuration.
  void validate() const;
};

/// Parameter swept by default for a detector: "ht" for Canny, "t" otherwise.
std::string default_swept_parameter(DetectorKind kind);
/// Detector with its default fixed parameters (sigma sqrt(2) for Canny, 2 for LoG).
DetectorSpec default_detector(DetectorKind kind);

inline constexpr double kTieTolerance = 1e-9;

struct SweepResult {
  std::string parameter;
  std::vector<ScoreRecord> records;
  /// First record attaining the maximum C (smallest parameter on exact ties).
  std::size_t best_index = 0;
  /// Every record within kTieTolerance of the maximum, including best_index.
  std::vector<std::size_t> ties;
  EdgeMap best_map{1, 1};
};

SweepResult run_sweep(const GrayImage& image, const SweepConfig& config);

struct DetectorBest {
  DetectorSpec detector;
  ScoreRecord record;
  EdgeMap map{1, 1};
};

struct DetectorComparison {
  std::vector<DetectorBest> rows;
  std::size_t global_best = 0;
  /// Full sweep per configuration, parallel to `rows`.
  std::vector<SweepResult> sweeps;
};

/// Argmax-C map per configuration, plus the argmax across configurations
/// (first one wins on ties). Throws InvalidArgument for an empty list.
DetectorComparison select_best_per_detector(const GrayImage& image,
                                            const std::vector<SweepConfig>& configs);

/// Unsupervised scores of each ground-truth map, in input order.
std::vector<ScoreRecord> score_gt_set(const GroundTruthSet& set, int window = 7);

/// Index of the record with maximal C; first one on ties.
std::size_t argmax_complexity(const std::vector<ScoreRecord>& records);

}  // namespace edgescore
