#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "edgescore/equilibrium.hpp"
#include "edgescore/error.hpp"
#include "test_util.hpp"

using namespace edgescore;

namespace {

// Dense floating point evaluation with no bit packing.
double naive_equilibrium(const EdgeMap& map, const PatternBank& bank) {
  const int w = bank.size();
  const int half = w / 2;
  std::vector<std::vector<double>> units;
  for (const auto& p : bank.patterns()) {
    units.push_back(p.unit_vector());
  }
  double sum = 0.0;
  for (const Cell& e : map.edges()) {
    std::vector<double> window(static_cast<std::size_t>(w * w), 0.0);
    double sq = 0.0;
    for (int dr = -half; dr <= half; ++dr) {
      for (int dc = -half; dc <= half; ++dc) {
        if (map.test({e.row + dr, e.col + dc})) {
          window[static_cast<std::size_t>((dr + half) * w + dc + half)] = 1.0;
          sq += 1.0;
        }
      }
    }
    const double norm = std::sqrt(sq);
    double best = 0.0;
    for (const auto& u : units) {
      double dot = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * window[i] / norm;
      }
      best = std::max(best, dot);
    }
    sum += std::min(1.0, best);
  }
  return sum / static_cast<double>(map.edge_count());
}

WindowBits full_rows(int t) {
  WindowBits bits(7);
  for (int r = 1; r <= t; ++r) {
    for (int c = 1; c <= 7; ++c) {
      bits.set({r, c});
    }
  }
  return bits;
}

}  // namespace

TEST_CASE("bars of thickness t score 1/sqrt(t) per window") {
  const PatternBank bank = generate_line_bank(7);
  for (int t : {1, 2, 3, 7}) {
    CHECK(local_equilibrium(full_rows(t), bank) == doctest::Approx(1.0 / std::sqrt(t)).epsilon(1e-12));
  }
}

TEST_CASE("interior pixels of a thick bar score 1/sqrt(t)") {
  const PatternBank bank = generate_line_bank(7);
  for (int t : {1, 2, 3}) {
    EdgeMap map(40, 20);
    std::vector<Cell> cells;
    for (int r = 8; r < 8 + t; ++r) {
      for (int c = 1; c <= 40; ++c) {
        cells.push_back({r, c});
      }
    }
    map = EdgeMap::from_cells(40, 20, cells);
    for (const Cell& e : map.edges()) {
      if (e.col >= 4 && e.col <= 37) {
        CHECK(local_equilibrium(extract_window(map, e, 7), bank) ==
              doctest::Approx(1.0 / std::sqrt(t)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("a single straight line through the whole window scores 1") {
  const PatternBank bank = generate_line_bank(7);
  const EdgeMap map = testutil::map_from_rows({
      ".......",
      ".......",
      ".......",
      "#######",
      ".......",
      ".......",
      ".......",
  });
  CHECK(local_equilibrium(extract_window(map, {4, 4}, 7), bank) == doctest::Approx(1.0));
}

TEST_CASE("an isolated pixel scores 1/sqrt(7)") {
  const PatternBank bank = generate_line_bank(7);
  const EdgeMap map = EdgeMap::from_cells(15, 15, std::vector<Cell>{{8, 8}});
  CHECK(equilibrium(map, bank) == doctest::Approx(1.0 / std::sqrt(7.0)).epsilon(1e-12));
  const EdgeMap corner = EdgeMap::from_cells(1, 1, std::vector<Cell>{{1, 1}});
  CHECK(equilibrium(corner, bank) == doctest::Approx(1.0 / std::sqrt(7.0)).epsilon(1e-12));
}

TEST_CASE("equilibrium matches the naive dense oracle") {
  std::mt19937_64 rng(2024);
  for (int w : {3, 5, 7, 9}) {
    const PatternBank bank = generate_line_bank(w);
    for (int trial = 0; trial < 6; ++trial) {
      std::uniform_real_distribution<double> density(0.02, 0.6);
      const EdgeMap map = testutil::random_map(rng, 32, 32, density(rng));
      if (map.empty()) {
        continue;
      }
      const double q = equilibrium(map, bank);
      CHECK(std::abs(q - naive_equilibrium(map, bank)) <= 1e-12);
      CHECK(q >= 0.0);
      CHECK(q <= 1.0);
    }
  }
}

TEST_CASE("equilibrium is translation and rotation invariant") {
  const PatternBank bank = generate_line_bank(7);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const EdgeMap shape = testutil::random_map(rng, 12, 9, 0.3);
    if (shape.empty()) {
      continue;
    }
    const EdgeMap a = testutil::embed(shape, 40, 40, 5, 7);
    const EdgeMap b = testutil::embed(shape, 40, 40, 20, 19);
    const double qa = equilibrium(a, bank);
    CHECK(equilibrium(b, bank) == doctest::Approx(qa).epsilon(1e-14));
    // Zero padding: the bare shape equals the shape inside a blank frame.
    CHECK(equilibrium(shape, bank) == doctest::Approx(qa).epsilon(1e-14));
    EdgeMap r = a;
    for (int k = 0; k < 3; ++k) {
      r = testutil::rotate90(r);
      CHECK(equilibrium(r, bank) == doctest::Approx(qa).epsilon(1e-14));
    }
  }
}

TEST_CASE("extract_window zero-pads outside the image") {
  const EdgeMap map = testutil::map_from_rows({"##", "#."});
  const EdgeWindow win = extract_window(map, {1, 1}, 7);
  CHECK(win.bits.popcount() == 3);
  CHECK(win.bits.test({4, 4}));
  CHECK(win.bits.test({4, 5}));
  CHECK(win.bits.test({5, 4}));
}

TEST_CASE("equilibrium error cases") {
  const PatternBank bank = generate_line_bank(7);
  CHECK_THROWS_AS(equilibrium(EdgeMap(5, 5), bank), EmptyMapError);
  const EdgeMap map = testutil::map_from_rows({"#.", ".."});
  CHECK_THROWS_AS(extract_window(map, {1, 2}, 7), InvalidArgument);
  CHECK_THROWS_AS(extract_window(map, {3, 1}, 7), InvalidArgument);
  CHECK_THROWS_AS(local_equilibrium(WindowBits(7), bank), InvalidArgument);
  CHECK_THROWS_AS(local_equilibrium(WindowBits(5, std::vector<Cell>{{3, 3}}), bank), InvalidArgument);
}
