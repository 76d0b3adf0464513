#include "edgescore/ks_entropy.hpp"

#include <algorithm>
#include <cmath>

#include "edgescore/error.hpp"
#include "edgescore/simd/kernels.hpp"

namespace edgescore {

namespace {

std::vector<double> distinct_sorted(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

struct Corner {
  double value;
  bool closed;  // false: left limit, counting strictly smaller coordinates
};

std::vector<Corner> candidate_corners(const std::vector<double>& distinct) {
  std::vector<Corner> corners;
  corners.reserve(2 * distinct.size() + 1);
  for (double v : distinct) {
    corners.push_back({v, true});
    corners.push_back({v, false});
  }
  corners.push_back({1.0, true});
  return corners;
}

}  // namespace

SampleSet::SampleSet(std::vector<Point2> points) : points_(std::move(points)) {
  if (points_.empty()) {
    throw EmptyMapError("a KS sample needs at least one point");
  }
  for (const auto& p : points_) {
    if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) {
      throw InvalidArgument("sample point outside the unit square");
    }
  }
}

SampleSet map_to_unit_square(std::span<const Cell> edges, int height, int width) {
  if (height < 1 || width < 1) {
    throw InvalidArgument("map dimensions must be positive");
  }
  std::vector<Point2> points;
  points.reserve(edges.size());
  for (const Cell& e : edges) {
    if (e.row < 1 || e.row > height || e.col < 1 || e.col > width) {
      throw InvalidArgument("edge pixel outside the map");
    }
    points.push_back({(e.row - 0.5) / height, (e.col - 0.5) / width});
  }
  return SampleSet(std::move(points));
}

KsResult ks_bruteforce(const SampleSet& sample) {
  const auto& points = sample.points();
  const double n = static_cast<double>(points.size());
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& p : points) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  const auto x_corners = candidate_corners(distinct_sorted(std::move(xs)));
  const auto y_corners = candidate_corners(distinct_sorted(std::move(ys)));

  KsResult result;
  for (const Corner& cx : x_corners) {
    for (const Corner& cy : y_corners) {
      std::size_t count = 0;
      for (const auto& p : points) {
        const bool in_x = cx.closed ? p.x <= cx.value : p.x < cx.value;
        const bool in_y = cy.closed ? p.y <= cy.value : p.y < cy.value;
        count += (in_x && in_y) ? 1 : 0;
      }
      const double diff = std::abs(static_cast<double>(count) / n - cx.value * cy.value);
      if (diff > result.statistic) {
        result.statistic = diff;
        result.argmax = {cx.value, cy.value};
      }
    }
  }
  return result;
}

KsResult ks_statistic(const SampleSet& sample) {
  auto points = sample.points();
  const double n = static_cast<double>(points.size());
  std::sort(points.begin(), points.end(),
            [](const Point2& a, const Point2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });

  std::vector<double> ys;
  ys.reserve(points.size());
  for (const auto& p : points) {
    ys.push_back(p.y);
  }
  ys = distinct_sorted(std::move(ys));
  const std::size_t ny = ys.size();

  std::vector<double> per_rank(ny, 0.0);
  std::vector<double> le(ny);
  std::vector<double> lt(ny);
  const auto& kernels = simd::kernels();
  KsResult result;
  std::size_t inserted = 0;

  // F_b - F is piecewise monotone between sample coordinates, so the supremum
  // sits on a corner taken either at a coordinate or as its left limit.
  auto evaluate = [&](double x) {
    double running = 0.0;
    for (std::size_t k = 0; k < ny; ++k) {
      lt[k] = running;
      running += per_rank[k];
      le[k] = running;
    }
    const double top = std::abs(static_cast<double>(inserted) / n - x * 1.0);
    if (top > result.statistic) {
      result.statistic = top;
      result.argmax = {x, 1.0};
    }
    const double row = kernels.ks_row_max(le.data(), lt.data(), ys.data(), ny, x, n);
    if (row > result.statistic) {
      result.statistic = row;
      for (std::size_t k = 0; k < ny; ++k) {
        const double f = x * ys[k];
        if (std::abs(le[k] / n - f) == row || std::abs(lt[k] / n - f) == row) {
          result.argmax = {x, ys[k]};
          break;
        }
      }
    }
  };

  std::size_t i = 0;
  while (i < points.size()) {
    const double x = points[i].x;
    evaluate(x);
    while (i < points.size() && points[i].x == x) {
      const auto rank = static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), points[i].y) - ys.begin());
      per_rank[rank] += 1.0;
      ++inserted;
      ++i;
    }
    evaluate(x);
  }
  evaluate(1.0);
  return result;
}

double entropy(const EdgeMap& map) {
  if (map.empty()) {
    throw EmptyMapError("entropy of an empty edge map is undefined");
  }
  return 1.0 - ks_statistic(map_to_unit_square(map.edges(), map.height(), map.width())).statistic;
}

}  // namespace edgescore
