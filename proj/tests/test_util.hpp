#pragma once

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "edgescore/raster.hpp"

namespace testutil {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("edgescore_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_bytes(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out << bytes;
}

inline edgescore::EdgeMap random_map(std::mt19937_64& rng, int width, int height, double density) {
  std::bernoulli_distribution bit(density);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (auto& b : bits) {
    b = bit(rng) ? 1 : 0;
  }
  return edgescore::EdgeMap(width, height, std::move(bits));
}

inline edgescore::EdgeMap map_from_rows(const std::vector<std::string>& rows) {
  const int height = static_cast<int>(rows.size());
  const int width = static_cast<int>(rows.front().size());
  std::vector<std::uint8_t> bits;
  for (const auto& row : rows) {
    for (char ch : row) {
      bits.push_back(ch == '#' ? 1 : 0);
    }
  }
  return edgescore::EdgeMap(width, height, std::move(bits));
}

}  // namespace testutil

namespace testutil {

// 90 degree clockwise rotation.
inline edgescore::EdgeMap rotate90(const edgescore::EdgeMap& map) {
  const int w = map.width();
  const int h = map.height();
  std::vector<std::uint8_t> bits(map.bits().size());
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      // (r, c) -> (c, h-1-r) in an h-wide, w-high result.
      bits[static_cast<std::size_t>(c) * static_cast<std::size_t>(h) + static_cast<std::size_t>(h - 1 - r)] =
          map.bits()(r, c);
    }
  }
  return edgescore::EdgeMap(h, w, std::move(bits));
}

// Copies `map` into a larger blank canvas at the given 0-based offset.
inline edgescore::EdgeMap embed(const edgescore::EdgeMap& map, int width, int height, int dr, int dc) {
  edgescore::EdgeMap out(width, height);
  std::vector<edgescore::Cell> cells;
  for (const auto& e : map.edges()) {
    cells.push_back({e.row + dr, e.col + dc});
  }
  return edgescore::EdgeMap::from_cells(width, height, cells);
}

}  // namespace testutil
