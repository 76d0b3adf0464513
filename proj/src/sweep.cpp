#include "edgescore/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

#include "edgescore/error.hpp"
#include "edgescore/pattern_bank.hpp"

namespace edgescore {

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto end = text.find(sep, start);
    parts.emplace_back(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (end == std::string_view::npos) {
      break;
    }
    start = end + 1;
  }
  return parts;
}

double parse_number(const std::string& token, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) {
      throw std::invalid_argument(token);
    }
    return v;
  } catch (const std::logic_error&) {
    throw InvalidArgument(std::string("grid ") + what + " is not a number: '" + token + "'");
  }
}

bool is_gradient(DetectorKind kind) {
  return kind == DetectorKind::sobel || kind == DetectorKind::prewitt || kind == DetectorKind::roberts;
}

GradientOperator gradient_operator(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::prewitt:
      return GradientOperator::prewitt;
    case DetectorKind::roberts:
      return GradientOperator::roberts;
    default:
      return GradientOperator::sobel;
  }
}

DetectorSpec spec_at(const SweepConfig& config, double value) {
  DetectorSpec spec = config.detector;
  spec.params[config.grid.parameter] = value;
  if (spec.kind == DetectorKind::canny && config.grid.parameter == "ht") {
    spec.params["lt"] = config.lt_ratio * value;
  }
  return spec;
}

// Builds a per-grid-point detector, reusing threshold-independent work when the
// swept parameter is a threshold.
std::function<EdgeMap(const DetectorSpec&)> make_detector(const GrayImage& image, const SweepConfig& config) {
  const DetectorKind kind = config.detector.kind;
  const std::string& swept = config.grid.parameter;
  if (kind == DetectorKind::canny && (swept == "ht" || swept == "lt")) {
    auto response = std::make_shared<CannyResponse>(image, config.detector.param("sigma"));
    return [response](const DetectorSpec& spec) { return response->hysteresis(spec.param("ht"), spec.param("lt")); };
  }
  if (is_gradient(kind) && swept == "t") {
    const auto thin = config.detector.params.find("thin");
    auto response = std::make_shared<GradientResponse>(image, gradient_operator(kind),
                                                       thin == config.detector.params.end() || thin->second != 0.0);
    return [response](const DetectorSpec& spec) { return response->threshold(spec.param("t")); };
  }
  if ((kind == DetectorKind::log || kind == DetectorKind::zerocross) && swept == "t") {
    auto response = std::make_shared<ZeroCrossResponse>(image, log_kernel(config.detector.param("sigma")));
    return [response](const DetectorSpec& spec) { return response->threshold(spec.param("t")); };
  }
  return [&image](const DetectorSpec& spec) { return detect(image, spec); };
}

template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body body) {
  unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      body(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) {
              failure = std::current_exception();
            }
          }
        }
      });
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

}  // namespace

GridSpec GridSpec::linear(std::string parameter, int count, double lo, double hi) {
  if (count < 2) {
    throw InvalidArgument("a grid needs at least 2 points");
  }
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidArgument("grid bounds must satisfy min < max");
  }
  GridSpec grid{std::move(parameter), {}};
  for (int i = 0; i < count; ++i) {
    grid.values.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  grid.values.back() = hi;
  return grid;
}

GridSpec GridSpec::unit_thresholds(std::string parameter) {
  GridSpec grid{std::move(parameter), {}};
  for (int k = 1; k <= 99; ++k) {
    grid.values.push_back(k / 100.0);
  }
  grid.values.push_back(0.999);
  return grid;
}

GridSpec GridSpec::parse(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 4 || parts[0].empty()) {
    throw InvalidArgument("grid must look like name:count:min:max, got '" + std::string(text) + "'");
  }
  const double count = parse_number(parts[1], "count");
  if (count != std::floor(count) || count < 2 || count > 1e6) {
    throw InvalidArgument("grid count must be an integer >= 2");
  }
  return linear(parts[0], static_cast<int>(count), parse_number(parts[2], "min"), parse_number(parts[3], "max"));
}

void SweepConfig::validate() const {
  if (grid.values.size() < 2) {
    throw InvalidArgument("a grid needs at least 2 points");
  }
  for (std::size_t i = 1; i < grid.values.size(); ++i) {
    if (!(grid.values[i - 1] < grid.values[i])) {
      throw InvalidArgument("grid values must be strictly increasing");
    }
  }
  if (window < 3 || window % 2 == 0) {
    throw InvalidArgument("window must be odd and >= 3");
  }
  if (detector.kind == DetectorKind::canny && !(lt_ratio > 0.0 && lt_ratio <= 1.0)) {
    throw InvalidArgument("lt ratio must lie in (0, 1]");
  }
  if (supervision && !(supervision->alpha > 0.0)) {
    throw InvalidArgument("Pratt alpha must be positive");
  }
  for (double v : grid.values) {
    try {
      spec_at(*this, v).validate();
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("grid point " + grid.parameter + "=" + std::to_string(v) + ": " + e.what());
    }
  }
}

std::string default_swept_parameter(DetectorKind kind) { return kind == DetectorKind::canny ? "ht" : "t"; }

DetectorSpec default_detector(DetectorKind kind) {
  DetectorSpec spec{kind, {}};
  if (kind == DetectorKind::canny) {
    spec.params["sigma"] = std::numbers::sqrt2;
  } else if (kind == DetectorKind::log || kind == DetectorKind::zerocross) {
    spec.params["sigma"] = 2.0;
  }
  return spec;
}

std::size_t argmax_complexity(const std::vector<ScoreRecord>& records) {
  if (records.empty()) {
    throw InvalidArgument("no records to select from");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].C > records[best].C) {
      best = i;
    }
  }
  return best;
}

SweepResult run_sweep(const GrayImage& image, const SweepConfig& config) {
  config.validate();
  if (config.supervision && (config.supervision->ground_truths.width() != image.width() ||
                             config.supervision->ground_truths.height() != image.height())) {
    throw DimensionMismatch("ground truth and image dimensions differ");
  }
  const PatternBank bank = generate_line_bank(config.window);
  std::vector<DistanceField> fields;
  if (config.supervision) {
    for (const auto& gt : config.supervision->ground_truths.maps()) {
      fields.push_back(distance_transform(gt));
    }
  }
  const auto run_detector = make_detector(image, config);

  const std::size_t count = config.grid.values.size();
  std::vector<ScoreRecord> records(count);
  std::vector<EdgeMap> maps(count, EdgeMap(1, 1));
  parallel_for(count, config.threads, [&](std::size_t i) {
    const DetectorSpec spec = spec_at(config, config.grid.values[i]);
    EdgeMap map = run_detector(spec);
    ScoreRecord record = complexity(map, bank);
    record.params = spec.params;
    if (config.supervision) {
      SupervisedScores supervised;
      if (!map.empty()) {
        const auto& set = config.supervision->ground_truths;
        supervised.q_gt = cosine_discrepancy_multi(map, set);
        for (std::size_t g = 0; g < set.size(); ++g) {
          supervised.pratt = std::max(supervised.pratt, pratt_fom(map, set[g], fields[g], config.supervision->alpha));
        }
      }
      record.supervised = supervised;
    }
    records[i] = std::move(record);
    maps[i] = std::move(map);
  });

  SweepResult result;
  result.parameter = config.grid.parameter;
  result.best_index = argmax_complexity(records);
  const double best = records[result.best_index].C;
  for (std::size_t i = 0; i < count; ++i) {
    if (records[i].C >= best - kTieTolerance) {
      result.ties.push_back(i);
    }
  }
  result.best_map = std::move(maps[result.best_index]);
  result.records = std::move(records);
  return result;
}

DetectorComparison select_best_per_detector(const GrayImage& image, const std::vector<SweepConfig>& configs) {
  if (configs.empty()) {
    throw InvalidArgument("no detector configurations given");
  }
  DetectorComparison comparison;
  for (const auto& config : configs) {
    SweepResult sweep = run_sweep(image, config);
    const ScoreRecord& best = sweep.records[sweep.best_index];
    DetectorSpec spec{config.detector.kind, best.params};
    comparison.rows.push_back({std::move(spec), best, sweep.best_map});
    comparison.sweeps.push_back(std::move(sweep));
  }
  for (std::size_t i = 1; i < comparison.rows.size(); ++i) {
    if (comparison.rows[i].record.C > comparison.rows[comparison.global_best].record.C) {
      comparison.global_best = i;
    }
  }
  return comparison;
}

std::vector<ScoreRecord> score_gt_set(const GroundTruthSet& set, int window) {
  const PatternBank bank = generate_line_bank(window);
  std::vector<ScoreRecord> records;
  records.reserve(set.size());
  for (const auto& gt : set.maps()) {
    records.push_back(complexity(gt, bank));
  }
  return records;
}

}  // namespace edgescore
