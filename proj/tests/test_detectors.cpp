#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "edgescore/detectors.hpp"
#include "edgescore/error.hpp"
#include "test_util.hpp"

using namespace edgescore;

namespace {

GrayImage vertical_step(int width, int height, int split) {
  std::vector<double> px;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      px.push_back(c < split ? 0.0 : 1.0);
    }
  }
  return GrayImage(width, height, px);
}

GrayImage noisy_square(std::uint64_t seed, int n = 64) {
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

bool subset(const EdgeMap& a, const EdgeMap& b) {
  for (const auto& e : a.edges()) {
    if (!b.test(e)) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("gaussian and LoG kernels") {
  for (double sigma : {0.5, 1.0, std::sqrt(2.0), 2.0, 3.3}) {
    const auto g = gaussian_kernel(sigma);
    const int half = static_cast<int>(std::ceil(4 * sigma));
    CHECK(g.size() == static_cast<std::size_t>(2 * half + 1));
    CHECK(std::accumulate(g.begin(), g.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(g[i] == doctest::Approx(g[g.size() - 1 - i]).epsilon(1e-15));
    }
    const Kernel k = log_kernel(sigma);
    CHECK(k.width == 2 * half + 1);
    CHECK(k.height == k.width);
    CHECK(std::abs(std::accumulate(k.taps.begin(), k.taps.end(), 0.0)) <= 1e-12);
    // Negative at the centre, as for a Laplacian of a bump.
    CHECK(k.taps[k.taps.size() / 2] < 0.0);
  }
  CHECK_THROWS_AS(gaussian_kernel(0.0), InvalidArgument);
  CHECK_THROWS_AS(log_kernel(-1.0), InvalidArgument);
}

TEST_CASE("convolution: identity, replicate border, separable equivalence") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RealField img(13, 9);
  for (auto& v : img.values()) {
    v = unit(rng);
  }
  CHECK(convolve(img, Kernel{}) == img);

  RealField flat(7, 5, 0.25);
  const Kernel box{3, 3, std::vector<double>(9, 1.0 / 9.0)};
  const RealField smoothed = convolve(flat, box);
  for (double v : smoothed.values()) {
    CHECK(v == doctest::Approx(0.25));
  }

  const std::vector<double> h{0.25, 0.5, 0.25};
  const std::vector<double> v{-1.0, 0.0, 1.0, 2.0, 0.5};
  Kernel outer{3, 5, {}};
  for (double a : v) {
    for (double b : h) {
      outer.taps.push_back(a * b);
    }
  }
  const RealField sep = convolve_separable(img, h, v);
  const RealField full = convolve(img, outer);
  for (std::size_t i = 0; i < sep.size(); ++i) {
    CHECK(std::abs(sep.values()[i] - full.values()[i]) <= 1e-12);
  }
  CHECK_THROWS_AS(convolve(img, Kernel{2, 1, {1.0, 1.0}}), InvalidArgument);
}

TEST_CASE("constant images give empty maps for every detector") {
  const GrayImage flat(20, 20, std::vector<double>(400, 0.6));
  CHECK(canny(flat, 0.3, 0.1, std::sqrt(2.0)).empty());
  for (auto op : {GradientOperator::sobel, GradientOperator::prewitt, GradientOperator::roberts}) {
    CHECK(gradient_detector(flat, op, 0.1).empty());
  }
  CHECK(log_detector(flat, 0.01, 2.0).empty());
}

TEST_CASE("a vertical step gives a single thin line") {
  const GrayImage step = vertical_step(32, 24, 16);
  const EdgeMap c = canny(step, 0.5, 0.2, 1.0);
  CHECK(c.edge_count() == 24);
  for (const auto& e : c.edges()) {
    CHECK(c.edges().front().col == e.col);
    CHECK(std::abs(e.col - 16) <= 1);
  }
  for (auto op : {GradientOperator::sobel, GradientOperator::prewitt}) {
    const EdgeMap g = gradient_detector(step, op, 0.5);
    CHECK(g.edge_count() == 24);
  }
  const EdgeMap thick = gradient_detector(step, GradientOperator::sobel, 0.5, false);
  CHECK(thick.edge_count() == 48);
  const EdgeMap z = log_detector(step, 0.05, 2.0);
  CHECK(z.edge_count() == 24);
}

TEST_CASE("raising thresholds only removes edges") {
  const GrayImage img = noisy_square(1);
  const CannyResponse canny_response(img, std::sqrt(2.0));
  const GradientResponse sobel(img, GradientOperator::sobel);
  const ZeroCrossResponse zc(img, log_kernel(2.0));
  EdgeMap prev_c = canny_response.hysteresis(0.01, 0.004);
  EdgeMap prev_g = sobel.threshold(0.01);
  EdgeMap prev_z = zc.threshold(0.01);
  for (int k = 2; k < 100; k += 7) {
    const double t = k / 100.0;
    const EdgeMap c = canny_response.hysteresis(t, 0.4 * t);
    const EdgeMap g = sobel.threshold(t);
    const EdgeMap z = zc.threshold(t);
    CHECK(subset(c, prev_c));
    CHECK(subset(g, prev_g));
    CHECK(subset(z, prev_z));
    prev_c = c;
    prev_g = g;
    prev_z = z;
  }
}

TEST_CASE("reusable responses match the one-shot detectors") {
  const GrayImage img = noisy_square(2);
  CHECK(CannyResponse(img, 1.5).hysteresis(0.3, 0.1) == canny(img, 0.3, 0.1, 1.5));
  CHECK(GradientResponse(img, GradientOperator::roberts).threshold(0.2) ==
        gradient_detector(img, GradientOperator::roberts, 0.2));
  CHECK(zerocross_detector(img, 0.1, log_kernel(2.0)) == log_detector(img, 0.1, 2.0));
}

TEST_CASE("hysteresis keeps weak pixels only when connected to strong ones") {
  const GrayImage img = noisy_square(3);
  const CannyResponse r(img, std::sqrt(2.0));
  const EdgeMap strong = r.hysteresis(0.5, 0.5);
  const EdgeMap both = r.hysteresis(0.5, 0.1);
  const EdgeMap weak_only = r.hysteresis(0.1, 0.1);
  CHECK(subset(strong, both));
  CHECK(subset(both, weak_only));
  for (const auto& e : both.edges()) {
    CHECK(r.suppressed()(e.row - 1, e.col - 1) > 0.1);
  }
  double max = 0.0;
  for (double v : r.suppressed().values()) {
    max = std::max(max, v);
  }
  CHECK(max == doctest::Approx(1.0));
}

TEST_CASE("detect dispatches on the spec and validates parameters") {
  const GrayImage img = noisy_square(4);
  DetectorSpec spec{DetectorKind::canny, {{"ht", 0.3}, {"lt", 0.12}, {"sigma", 1.0}}};
  CHECK(detect(img, spec) == canny(img, 0.3, 0.12, 1.0));
  spec.params["lt"] = 0.5;
  CHECK_THROWS_AS(detect(img, spec), InvalidArgument);
  CHECK_THROWS_AS(detect(img, DetectorSpec{DetectorKind::sobel, {}}), InvalidArgument);
  CHECK_THROWS_AS(detect(img, DetectorSpec{DetectorKind::sobel, {{"t", -0.1}}}), InvalidArgument);
  CHECK(detect(img, DetectorSpec{DetectorKind::prewitt, {{"t", 0.2}}}) ==
        gradient_detector(img, GradientOperator::prewitt, 0.2));
  CHECK(detect(img, DetectorSpec{DetectorKind::log, {{"t", 0.1}, {"sigma", 2.0}}}) ==
        detect(img, DetectorSpec{DetectorKind::zerocross, {{"t", 0.1}, {"sigma", 2.0}}}));
  CHECK(parse_detector_kind("roberts") == DetectorKind::roberts);
  CHECK(to_string(DetectorKind::zerocross) == "zerocross");
  CHECK_THROWS_AS(parse_detector_kind("sobol"), InvalidArgument);
}
