#include <doctest.h>

#include <cmath>
#include <random>
#include <regex>
#include <sstream>

#include "edgescore/error.hpp"
#include "edgescore/report.hpp"
#include "edgescore/sweep.hpp"
#include "test_util.hpp"

using namespace edgescore;

namespace {

GrayImage noisy_square(std::uint64_t seed, int n = 48) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<double> px;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const bool inside = r >= n / 4 && r < 3 * n / 4 && c >= n / 4 && c < 3 * n / 4;
      px.push_back(std::clamp((inside ? 0.8 : 0.2) + noise(rng), 0.0, 1.0));
    }
  }
  return GrayImage(n, n, px);
}

EdgeMap square_outline(int n) {
  std::vector<Cell> cells;
  const int lo = n / 4 + 1;
  const int hi = 3 * n / 4;
  for (int i = lo; i <= hi; ++i) {
    cells.push_back({lo, i});
    cells.push_back({hi, i});
    cells.push_back({i, lo});
    cells.push_back({i, hi});
  }
  return EdgeMap::from_cells(n, n, cells);
}

SweepConfig canny_config(GridSpec grid) {
  SweepConfig config;
  config.detector = default_detector(DetectorKind::canny);
  config.grid = std::move(grid);
  return config;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) {
    out.push_back(item);
  }
  return out;
}

}  // namespace

TEST_CASE("grid construction") {
  const GridSpec unit = GridSpec::unit_thresholds("ht");
  REQUIRE(unit.values.size() == 100);
  CHECK(unit.values.front() == doctest::Approx(0.01));
  CHECK(unit.values[98] == doctest::Approx(0.99));
  CHECK(unit.values.back() == 0.999);
  for (std::size_t i = 1; i < unit.values.size(); ++i) {
    CHECK(unit.values[i] > unit.values[i - 1]);
  }
  const GridSpec g = GridSpec::parse("t:5:0.1:0.5");
  CHECK(g.parameter == "t");
  REQUIRE(g.values.size() == 5);
  CHECK(g.values.front() == 0.1);
  CHECK(g.values[2] == doctest::Approx(0.3));
  CHECK(g.values.back() == 0.5);
  for (const char* bad : {"t:5:0.1", "t:1:0.1:0.5", "t:x:0.1:0.5", "t:5:0.5:0.1", "t:5:a:0.5", ":5:0.1:0.5"}) {
    CHECK_THROWS_AS(GridSpec::parse(bad), InvalidArgument);
  }
}

TEST_CASE("defaults per detector") {
  CHECK(default_swept_parameter(DetectorKind::canny) == "ht");
  CHECK(default_swept_parameter(DetectorKind::sobel) == "t");
  CHECK(default_detector(DetectorKind::canny).param("sigma") == doctest::Approx(std::sqrt(2.0)));
  CHECK(default_detector(DetectorKind::log).param("sigma") == 2.0);
}

TEST_CASE("run_sweep records agree with direct scoring") {
  const GrayImage img = noisy_square(1);
  const PatternBank bank = generate_line_bank(7);
  const SweepResult result = run_sweep(img, canny_config(GridSpec::linear("ht", 12, 0.05, 0.95)));
  REQUIRE(result.records.size() == 12);
  CHECK(result.parameter == "ht");
  double best = -1.0;
  for (const ScoreRecord& r : result.records) {
    const double ht = r.params.at("ht");
    CHECK(r.params.at("lt") == doctest::Approx(0.4 * ht));
    const EdgeMap map = canny(img, ht, r.params.at("lt"), r.params.at("sigma"));
    const ScoreRecord direct = complexity(map, bank);
    CHECK(r.C == direct.C);
    CHECK(r.edge_count == map.edge_count());
    best = std::max(best, r.C);
  }
  const ScoreRecord& top = result.records[result.best_index];
  CHECK(top.C == best);
  for (std::size_t i = 0; i < result.best_index; ++i) {
    CHECK(result.records[i].C < best);
  }
  CHECK(std::find(result.ties.begin(), result.ties.end(), result.best_index) != result.ties.end());
  for (std::size_t i : result.ties) {
    CHECK(result.records[i].C >= best - kTieTolerance);
  }
  CHECK(result.best_map == canny(img, top.params.at("ht"), top.params.at("lt"), top.params.at("sigma")));
}

TEST_CASE("thread count does not change the records") {
  const GrayImage img = noisy_square(2);
  SweepConfig one = canny_config(GridSpec::linear("ht", 9, 0.1, 0.9));
  one.threads = 1;
  SweepConfig many = one;
  many.threads = 5;
  const SweepResult a = run_sweep(img, one);
  const SweepResult b = run_sweep(img, many);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].C == b.records[i].C);
    CHECK(a.records[i].params == b.records[i].params);
  }
  CHECK(a.best_index == b.best_index);
}

TEST_CASE("empty outputs become degenerate records") {
  const GrayImage flat(16, 16, std::vector<double>(256, 0.3));
  SweepConfig config;
  config.detector = default_detector(DetectorKind::sobel);
  config.grid = GridSpec::linear("t", 3, 0.1, 0.5);
  const SweepResult result = run_sweep(flat, config);
  for (const auto& r : result.records) {
    CHECK(r.degenerate);
    CHECK(r.C == 0.0);
  }
  CHECK(result.best_index == 0);
  CHECK(result.ties.size() == 3);
}

TEST_CASE("supervised sweep adds q_GT and Pratt") {
  const GrayImage img = noisy_square(3);
  SweepConfig config = canny_config(GridSpec::linear("ht", 6, 0.1, 0.9));
  config.supervision = Supervision{GroundTruthSet({square_outline(48)}), kDefaultPrattAlpha};
  const SweepResult result = run_sweep(img, config);
  for (const auto& r : result.records) {
    REQUIRE(r.supervised.has_value());
    CHECK(r.supervised->q_gt >= 0.0);
    CHECK(r.supervised->q_gt <= 1.0);
    CHECK(r.supervised->pratt >= 0.0);
    CHECK(r.supervised->pratt <= 1.0);
  }
  SweepConfig wrong = config;
  wrong.supervision = Supervision{GroundTruthSet({square_outline(20)}), kDefaultPrattAlpha};
  CHECK_THROWS_AS(run_sweep(img, wrong), DimensionMismatch);
}

TEST_CASE("sweep configuration validation") {
  const GrayImage img = noisy_square(4);
  SweepConfig config = canny_config(GridSpec::linear("ht", 4, 0.1, 0.9));
  config.window = 4;
  CHECK_THROWS_AS(run_sweep(img, config), InvalidArgument);
  config.window = 7;
  config.lt_ratio = 0.0;
  CHECK_THROWS_AS(run_sweep(img, config), InvalidArgument);
  config.lt_ratio = 0.4;
  config.grid = GridSpec{"ht", {0.5, 0.2}};
  CHECK_THROWS_AS(run_sweep(img, config), InvalidArgument);
}

TEST_CASE("CSV output reparses to the same doubles") {
  const GrayImage img = noisy_square(5);
  SweepConfig config = canny_config(GridSpec::linear("ht", 5, 0.1, 0.9));
  config.supervision = Supervision{GroundTruthSet({square_outline(48)}), kDefaultPrattAlpha};
  const SweepResult result = run_sweep(img, config);
  std::ostringstream out;
  write_csv(result, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  const auto header = split(line, ',');
  CHECK(header == std::vector<std::string>{"ht", "lt", "sigma", "edge_count", "q", "H", "C", "q_GT", "pratt"});
  std::size_t row = 0;
  while (std::getline(in, line)) {
    const auto cells = split(line, ',');
    REQUIRE(cells.size() == header.size());
    const ScoreRecord& r = result.records[row++];
    CHECK(std::stod(cells[0]) == r.params.at("ht"));
    CHECK(std::stoul(cells[3]) == r.edge_count);
    CHECK(std::stod(cells[4]) == r.q);
    CHECK(std::stod(cells[5]) == r.H);
    CHECK(std::stod(cells[6]) == r.C);
    CHECK(std::stod(cells[7]) == r.supervised->q_gt);
    CHECK(std::stod(cells[8]) == r.supervised->pratt);
  }
  CHECK(row == result.records.size());
}

TEST_CASE("SVG plot has three curves and one best marker") {
  const GrayImage img = noisy_square(6);
  const SweepResult result = run_sweep(img, canny_config(GridSpec::linear("ht", 7, 0.1, 0.9)));
  std::ostringstream out;
  write_svg(result, out);
  const std::string svg = out.str();
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  for (const char* id : {"q", "H", "C"}) {
    const std::regex re(std::string("<polyline id=\"") + id + "\"[^>]*points=\"([^\"]*)\"");
    std::smatch m;
    REQUIRE(std::regex_search(svg, m, re));
    CHECK(split(m[1].str(), ' ').size() == result.records.size());
  }
  const std::regex circle("<circle id=\"best\"");
  CHECK(std::distance(std::sregex_iterator(svg.begin(), svg.end(), circle), std::sregex_iterator()) == 1);
}

TEST_CASE("select_best_per_detector picks per-detector and global maxima") {
  const GrayImage img = noisy_square(7);
  std::vector<SweepConfig> configs;
  for (auto kind : {DetectorKind::canny, DetectorKind::sobel, DetectorKind::log}) {
    SweepConfig c;
    c.detector = default_detector(kind);
    c.grid = GridSpec::linear(default_swept_parameter(kind), 8, 0.05, 0.8);
    configs.push_back(c);
  }
  const DetectorComparison cmp = select_best_per_detector(img, configs);
  REQUIRE(cmp.rows.size() == 3);
  REQUIRE(cmp.sweeps.size() == 3);
  double global = -1.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const SweepResult& s = cmp.sweeps[i];
    CHECK(cmp.rows[i].record.C == s.records[s.best_index].C);
    CHECK(cmp.rows[i].map == s.best_map);
    CHECK(cmp.rows[i].detector.kind == configs[i].detector.kind);
    global = std::max(global, cmp.rows[i].record.C);
  }
  CHECK(cmp.rows[cmp.global_best].record.C == global);
  CHECK_THROWS_AS(select_best_per_detector(img, {}), InvalidArgument);
}

TEST_CASE("score_gt_set and argmax_complexity") {
  std::vector<ScoreRecord> recs(4);
  recs[0].C = 0.2;
  recs[1].C = 0.7;
  recs[2].C = 0.7;
  recs[3].C = 0.1;
  CHECK(argmax_complexity(recs) == 1);
  CHECK_THROWS_AS(argmax_complexity({}), InvalidArgument);

  const GroundTruthSet set({square_outline(40), testutil::embed(square_outline(20), 40, 40, 3, 3)});
  const auto scored = score_gt_set(set, 7);
  REQUIRE(scored.size() == 2);
  const PatternBank bank = generate_line_bank(7);
  CHECK(scored[0].C == complexity(set[0], bank).C);
  CHECK(scored[1].C == complexity(set[1], bank).C);
}
