#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace edgescore {

/// Pixel coordinate, 1-based: row in [1, height], col in [1, width].
struct Cell {
  int row = 0;
  int col = 0;
  auto operator<=>(const Cell&) const = default;
};

/// Dense row-major 2D array with 0-based indexing.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {}
  Grid(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(int r, int c) { return data_[index(r, c)]; }
  const T& operator()(int r, int c) const { return data_[index(r, c)]; }

  std::span<T> row(int r) { return {data_.data() + index(r, 0), static_cast<std::size_t>(width_)}; }
  std::span<const T> row(int r) const {
    return {data_.data() + index(r, 0), static_cast<std::size_t>(width_)};
  }

  std::vector<T>& values() { return data_; }
  const std::vector<T>& values() const { return data_; }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(c);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// Unconstrained real-valued raster (filter responses, gradients).
using RealField = Grid<double>;

/// Grayscale luminance image with every pixel in [0, 1].
class GrayImage {
 public:
  /// Throws InvalidArgument when dimensions are not positive, the value count is
  /// wrong, or a value lies outside [0, 1].
  GrayImage(int width, int height, std::vector<double> pixels);
  explicit GrayImage(RealField field);

  int width() const { return field_.width(); }
  int height() const { return field_.height(); }
  /// 1-based access.
  double at(Cell cell) const { return field_(cell.row - 1, cell.col - 1); }
  const RealField& field() const { return field_; }

 private:
  RealField field_;
};

/// Binary edge map together with its edge set E.
class EdgeMap {
 public:
  /// An all-background map.
  EdgeMap(int width, int height);
  /// `bits` is row-major; any nonzero value is an edge pixel.
  EdgeMap(int width, int height, std::vector<std::uint8_t> bits);
  static EdgeMap from_cells(int width, int height, std::span<const Cell> cells);

  int width() const { return bits_.width(); }
  int height() const { return bits_.height(); }

  /// 1-based; false outside the image.
  bool test(Cell cell) const;
  bool contains(Cell cell) const {
    return cell.row >= 1 && cell.row <= height() && cell.col >= 1 && cell.col <= width();
  }

  /// Edge pixels in row-major order.
  const std::vector<Cell>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }

  /// Row-major 0/1 bytes.
  const Grid<std::uint8_t>& bits() const { return bits_; }

  bool operator==(const EdgeMap& other) const { return bits_ == other.bits_; }

 private:
  Grid<std::uint8_t> bits_;
  std::vector<Cell> edges_;
};

}  // namespace edgescore
