#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "edgescore/raster.hpp"

namespace edgescore {

/// Standard Bresenham rasterization of the segment p0 -> p1 inclusive inside a
/// `window` x `window` grid of 1-based cells. The major axis advances by one per
/// step; a half-cell tie on the minor axis rounds toward p0.
std::vector<Cell> bresenham_segment(Cell p0, Cell p1, int window);

/// Square odd-sized bit window, packed row-major (bit index (row-1)*size + col-1).
class WindowBits {
 public:
  explicit WindowBits(int size);
  WindowBits(int size, std::span<const Cell> cells);

  int size() const { return size_; }
  bool test(Cell cell) const;
  void set(Cell cell);
  int popcount() const;
  std::span<const std::uint64_t> words() const { return words_; }
  std::vector<Cell> cells() const;

  static int word_count(int size) { return (size * size + 63) / 64; }

  auto operator<=>(const WindowBits&) const = default;

 private:
  int size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// One line-like pattern b_j together with its normalization b_j/||b_j||.
class Pattern {
 public:
  /// Throws InvalidArgument when `bits` is empty.
  explicit Pattern(WindowBits bits);

  int size() const { return bits_.size(); }
  const WindowBits& bits() const { return bits_; }
  int length() const { return length_; }
  double norm() const { return norm_; }
  /// Dense unit vector of length size*size.
  std::vector<double> unit_vector() const;

 private:
  WindowBits bits_;
  int length_;
  double norm_;
};

/// Deduplicated family of patterns sharing one window size, plus the packed
/// layout the matching kernels consume.
class PatternBank {
 public:
  /// Duplicate grids are dropped, keeping first occurrences in order.
  PatternBank(int size, std::vector<WindowBits> grids);

  int size() const { return size_; }
  std::size_t count() const { return patterns_.size(); }
  const std::vector<Pattern>& patterns() const { return patterns_; }

  /// Packed pattern words, `words_per_pattern()` per pattern. For single-word
  /// banks the pattern count is padded to a multiple of 4 with empty patterns.
  std::span<const std::uint64_t> packed_words() const { return packed_; }
  /// 1/||b_j|| per packed pattern (0 for padding).
  std::span<const double> inverse_norms() const { return inverse_norms_; }
  int words_per_pattern() const { return WindowBits::word_count(size_); }

 private:
  int size_;
  std::vector<Pattern> patterns_;
  std::vector<std::uint64_t> packed_;
  std::vector<double> inverse_norms_;
};

/// The 8 symmetries of the square applied to a window: index 0 is the identity.
WindowBits dihedral_image(const WindowBits& bits, int symmetry);

/// Bresenham segments between every ordered pair of distinct border cells,
/// closed under the dihedral group and deduplicated. Throws InvalidArgument
/// unless `window` is odd and >= 3.
PatternBank generate_line_bank(int window = 7);

/// One PBM per pattern, named pattern_0000.pbm, pattern_0001.pbm, ...
void dump_bank(const PatternBank& bank, const std::filesystem::path& directory);

}  // namespace edgescore
