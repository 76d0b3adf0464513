#include "edgescore/equilibrium.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include "edgescore/error.hpp"
#include "edgescore/simd/kernels.hpp"

namespace edgescore {

namespace {

double best_match_multiword(const PatternBank& bank, std::span<const std::uint64_t> window) {
  const auto words = static_cast<std::size_t>(bank.words_per_pattern());
  const auto packed = bank.packed_words();
  const auto inverse_norms = bank.inverse_norms();
  double best = 0.0;
  for (std::size_t j = 0; j < inverse_norms.size(); ++j) {
    int dot = 0;
    for (std::size_t i = 0; i < words; ++i) {
      dot += std::popcount(packed[j * words + i] & window[i]);
    }
    best = std::max(best, static_cast<double>(dot) * inverse_norms[j]);
  }
  return best;
}

double finish(double best_projection, int window_popcount) {
  return std::min(1.0, best_projection / std::sqrt(static_cast<double>(window_popcount)));
}

double score_words(std::span<const std::uint64_t> window, int popcount, const PatternBank& bank) {
  if (bank.words_per_pattern() == 1) {
    const auto packed = bank.packed_words();
    const double best = simd::kernels().best_match(packed.data(), bank.inverse_norms().data(),
                                                   packed.size(), window[0]);
    return finish(best, popcount);
  }
  return finish(best_match_multiword(bank, window), popcount);
}

}  // namespace

EdgeWindow extract_window(const EdgeMap& map, Cell center, int size) {
  if (!map.contains(center)) {
    throw InvalidArgument("window centre outside the edge map");
  }
  if (!map.test(center)) {
    throw InvalidArgument("window centre is not an edge pixel");
  }
  WindowBits bits(size);
  const int half = size / 2;
  for (int dr = -half; dr <= half; ++dr) {
    for (int dc = -half; dc <= half; ++dc) {
      if (map.test({center.row + dr, center.col + dc})) {
        bits.set({dr + half + 1, dc + half + 1});
      }
    }
  }
  return {center, std::move(bits)};
}

double local_equilibrium(const WindowBits& window, const PatternBank& bank) {
  if (window.size() != bank.size()) {
    throw InvalidArgument("window and pattern bank sizes differ");
  }
  const int popcount = window.popcount();
  if (popcount == 0) {
    throw InvalidArgument("window has no edge pixels");
  }
  return score_words(window.words(), popcount, bank);
}

double equilibrium(const EdgeMap& map, const PatternBank& bank) {
  if (map.empty()) {
    throw EmptyMapError("equilibrium of an empty edge map is undefined");
  }
  const int size = bank.size();
  const int half = size / 2;
  const auto words = static_cast<std::size_t>(bank.words_per_pattern());
  std::vector<std::uint64_t> window(words);
  double sum = 0.0;
  for (const Cell& center : map.edges()) {
    std::fill(window.begin(), window.end(), 0);
    int popcount = 0;
    std::size_t bit = 0;
    for (int dr = -half; dr <= half; ++dr) {
      for (int dc = -half; dc <= half; ++dc, ++bit) {
        if (map.test({center.row + dr, center.col + dc})) {
          window[bit / 64] |= std::uint64_t{1} << (bit % 64);
          ++popcount;
        }
      }
    }
    sum += score_words(window, popcount, bank);
  }
  return sum / static_cast<double>(map.edge_count());
}

}  // namespace edgescore
