#include "edgescore/raster.hpp"

#include <algorithm>
#include <string>

#include "edgescore/error.hpp"

namespace edgescore {

namespace {

void check_dimensions(int width, int height) {
  if (width < 1 || height < 1) {
    throw InvalidArgument("raster dimensions must be positive, got " + std::to_string(width) + "x" +
                          std::to_string(height));
  }
}

}  // namespace

GrayImage::GrayImage(int width, int height, std::vector<double> pixels)
    : GrayImage(RealField(width, height, std::move(pixels))) {
  check_dimensions(width, height);
}

GrayImage::GrayImage(RealField field) : field_(std::move(field)) {
  check_dimensions(field_.width(), field_.height());
  if (field_.size() != static_cast<std::size_t>(field_.width()) * static_cast<std::size_t>(field_.height())) {
    throw InvalidArgument("pixel count does not match image dimensions");
  }
  for (double v : field_.values()) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidArgument("gray values must lie in [0, 1]");
    }
  }
}

EdgeMap::EdgeMap(int width, int height)
    : EdgeMap(width, height,
              std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                        static_cast<std::size_t>(std::max(height, 0)))) {}

EdgeMap::EdgeMap(int width, int height, std::vector<std::uint8_t> bits) {
  check_dimensions(width, height);
  if (bits.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw InvalidArgument("bit count does not match edge map dimensions");
  }
  for (auto& b : bits) {
    b = b != 0 ? 1 : 0;
  }
  bits_ = Grid<std::uint8_t>(width, height, std::move(bits));
  for (int r = 0; r < height; ++r) {
    const auto row = bits_.row(r);
    for (int c = 0; c < width; ++c) {
      if (row[static_cast<std::size_t>(c)]) {
        edges_.push_back({r + 1, c + 1});
      }
    }
  }
}

EdgeMap EdgeMap::from_cells(int width, int height, std::span<const Cell> cells) {
  check_dimensions(width, height);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (const Cell& cell : cells) {
    if (cell.row < 1 || cell.row > height || cell.col < 1 || cell.col > width) {
      throw InvalidArgument("cell outside edge map");
    }
    bits[static_cast<std::size_t>(cell.row - 1) * static_cast<std::size_t>(width) +
         static_cast<std::size_t>(cell.col - 1)] = 1;
  }
  return EdgeMap(width, height, std::move(bits));
}

bool EdgeMap::test(Cell cell) const {
  return contains(cell) && bits_(cell.row - 1, cell.col - 1) != 0;
}

}  // namespace edgescore
