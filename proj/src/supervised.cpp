#include "edgescore/supervised.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "edgescore/error.hpp"

namespace edgescore {

namespace {

void require_same_size(const EdgeMap& a, const EdgeMap& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw DimensionMismatch("edge maps have different dimensions");
  }
}

void require_nonempty(const EdgeMap& map, const char* what) {
  if (map.empty()) {
    throw EmptyMapError(std::string(what) + " has no edge pixels");
  }
}

constexpr std::int64_t kUnreached = -1;

// Lower envelope of parabolas y = (x - v)^2 + f(v) over the finite samples of f
// (kUnreached marks +infinity). Breakpoints are kept as exact fractions.
void squared_distance_1d(const std::vector<std::int64_t>& f, std::vector<std::int64_t>& out) {
  const auto n = static_cast<std::int64_t>(f.size());
  struct Breakpoint {
    std::int64_t num;
    std::int64_t den;  // > 0
  };
  std::vector<std::int64_t> vertex;
  std::vector<Breakpoint> start;  // start[k]: where parabola k begins to be lowest
  auto intersection = [&](std::int64_t q, std::int64_t p) {
    return Breakpoint{(f[q] + q * q) - (f[p] + p * p), 2 * (q - p)};
  };
  auto less_equal = [](Breakpoint a, Breakpoint b) { return a.num * b.den <= b.num * a.den; };

  for (std::int64_t q = 0; q < n; ++q) {
    if (f[q] == kUnreached) {
      continue;
    }
    if (vertex.empty()) {
      vertex.push_back(q);
      start.push_back({0, 1});  // unused lower sentinel
      continue;
    }
    Breakpoint s = intersection(q, vertex.back());
    while (vertex.size() > 1 && less_equal(s, start.back())) {
      vertex.pop_back();
      start.pop_back();
      s = intersection(q, vertex.back());
    }
    vertex.push_back(q);
    start.push_back(s);
  }

  std::size_t k = 0;
  for (std::int64_t q = 0; q < n; ++q) {
    while (k + 1 < vertex.size() && start[k + 1].num < q * start[k + 1].den) {
      ++k;
    }
    const std::int64_t d = q - vertex[k];
    out[static_cast<std::size_t>(q)] = d * d + f[static_cast<std::size_t>(vertex[k])];
  }
}

}  // namespace

GroundTruthSet::GroundTruthSet(std::vector<EdgeMap> maps) : maps_(std::move(maps)) {
  if (maps_.empty()) {
    throw InvalidArgument("a ground-truth set needs at least one map");
  }
  for (const auto& m : maps_) {
    require_same_size(maps_.front(), m);
    require_nonempty(m, "ground-truth map");
  }
}

DistanceField::DistanceField(int width, int height, std::vector<double> distances)
    : width_(width), height_(height), distances_(std::move(distances)) {
  if (distances_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw InvalidArgument("distance count does not match dimensions");
  }
}

double cosine_discrepancy(const EdgeMap& map, const EdgeMap& ground_truth) {
  require_same_size(map, ground_truth);
  require_nonempty(map, "edge map");
  require_nonempty(ground_truth, "ground-truth map");
  std::size_t overlap = 0;
  for (const Cell& e : map.edges()) {
    overlap += ground_truth.test(e) ? 1 : 0;
  }
  const double norms = std::sqrt(static_cast<double>(map.edge_count()) *
                                 static_cast<double>(ground_truth.edge_count()));
  return static_cast<double>(overlap) / norms;
}

double cosine_discrepancy_multi(const EdgeMap& map, const GroundTruthSet& set) {
  double best = 0.0;
  for (const auto& gt : set.maps()) {
    best = std::max(best, cosine_discrepancy(map, gt));
  }
  return best;
}

DistanceField distance_transform(const EdgeMap& ground_truth) {
  require_nonempty(ground_truth, "ground-truth map");
  const int width = ground_truth.width();
  const int height = ground_truth.height();
  const auto w = static_cast<std::size_t>(width);
  const auto h = static_cast<std::size_t>(height);

  // Column pass: squared distance to the nearest edge in the same column.
  std::vector<std::int64_t> column_sq(w * h, kUnreached);
  std::vector<std::int64_t> f(h);
  std::vector<std::int64_t> out(std::max(w, h));
  for (std::size_t c = 0; c < w; ++c) {
    for (std::size_t r = 0; r < h; ++r) {
      f[r] = ground_truth.bits()(static_cast<int>(r), static_cast<int>(c)) ? 0 : kUnreached;
    }
    if (std::all_of(f.begin(), f.end(), [](std::int64_t v) { return v == kUnreached; })) {
      continue;
    }
    squared_distance_1d(f, out);
    for (std::size_t r = 0; r < h; ++r) {
      column_sq[r * w + c] = out[r];
    }
  }

  // Row pass over the column results; every row has a finite sample because the
  // map is nonempty.
  std::vector<double> distances(w * h);
  std::vector<std::int64_t> g(w);
  for (std::size_t r = 0; r < h; ++r) {
    std::copy_n(column_sq.begin() + static_cast<std::ptrdiff_t>(r * w), w, g.begin());
    squared_distance_1d(g, out);
    for (std::size_t c = 0; c < w; ++c) {
      distances[r * w + c] = std::sqrt(static_cast<double>(out[c]));
    }
  }
  return DistanceField(width, height, std::move(distances));
}

double pratt_fom(const EdgeMap& map, const EdgeMap& ground_truth, double alpha) {
  require_same_size(map, ground_truth);
  require_nonempty(map, "edge map");
  return pratt_fom(map, ground_truth, distance_transform(ground_truth), alpha);
}

double pratt_fom(const EdgeMap& map, const EdgeMap& ground_truth, const DistanceField& field,
                 double alpha) {
  require_same_size(map, ground_truth);
  require_nonempty(map, "edge map");
  require_nonempty(ground_truth, "ground-truth map");
  if (field.width() != ground_truth.width() || field.height() != ground_truth.height()) {
    throw DimensionMismatch("distance field does not match the ground truth");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidArgument("Pratt alpha must be positive and finite");
  }
  double sum = 0.0;
  for (const Cell& e : map.edges()) {
    const double d = field.at(e);
    sum += 1.0 / (1.0 + alpha * d * d);
  }
  return sum / static_cast<double>(std::max(map.edge_count(), ground_truth.edge_count()));
}

}  // namespace edgescore
