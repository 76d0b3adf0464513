#include "edgescore/pattern_bank.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>

#include "edgescore/error.hpp"
#include "edgescore/raster_io.hpp"

namespace edgescore {

namespace {

void check_window_size(int size) {
  if (size < 1 || size % 2 == 0) {
    throw InvalidArgument("window size must be odd and positive, got " + std::to_string(size));
  }
}

bool inside(Cell cell, int size) {
  return cell.row >= 1 && cell.row <= size && cell.col >= 1 && cell.col <= size;
}

int sign(int v) { return (v > 0) - (v < 0); }

std::size_t bit_index(Cell cell, int size) {
  return static_cast<std::size_t>(cell.row - 1) * static_cast<std::size_t>(size) +
         static_cast<std::size_t>(cell.col - 1);
}

}  // namespace

std::vector<Cell> bresenham_segment(Cell p0, Cell p1, int window) {
  if (!inside(p0, window) || !inside(p1, window)) {
    throw InvalidArgument("segment endpoint outside the window grid");
  }
  if (p0 == p1) {
    throw InvalidArgument("segment endpoints must differ");
  }
  const int step_row = sign(p1.row - p0.row);
  const int step_col = sign(p1.col - p0.col);
  const int span_row = std::abs(p1.row - p0.row);
  const int span_col = std::abs(p1.col - p0.col);

  std::vector<Cell> cells;
  if (span_col >= span_row) {
    cells.reserve(static_cast<std::size_t>(span_col) + 1);
    int err = 2 * span_row - span_col;
    int row = p0.row;
    for (int i = 0, col = p0.col; i <= span_col; ++i, col += step_col) {
      cells.push_back({row, col});
      if (err > 0) {
        row += step_row;
        err -= 2 * span_col;
      }
      err += 2 * span_row;
    }
  } else {
    cells.reserve(static_cast<std::size_t>(span_row) + 1);
    int err = 2 * span_col - span_row;
    int col = p0.col;
    for (int i = 0, row = p0.row; i <= span_row; ++i, row += step_row) {
      cells.push_back({row, col});
      if (err > 0) {
        col += step_col;
        err -= 2 * span_row;
      }
      err += 2 * span_col;
    }
  }
  return cells;
}

WindowBits::WindowBits(int size) : size_(size) {
  check_window_size(size);
  words_.assign(static_cast<std::size_t>(word_count(size)), 0);
}

WindowBits::WindowBits(int size, std::span<const Cell> cells) : WindowBits(size) {
  for (const Cell& cell : cells) {
    set(cell);
  }
}

bool WindowBits::test(Cell cell) const {
  if (!inside(cell, size_)) {
    return false;
  }
  const std::size_t i = bit_index(cell, size_);
  return (words_[i / 64] >> (i % 64)) & 1u;
}

void WindowBits::set(Cell cell) {
  if (!inside(cell, size_)) {
    throw InvalidArgument("cell outside the window");
  }
  const std::size_t i = bit_index(cell, size_);
  words_[i / 64] |= std::uint64_t{1} << (i % 64);
}

int WindowBits::popcount() const {
  int total = 0;
  for (auto w : words_) {
    total += std::popcount(w);
  }
  return total;
}

std::vector<Cell> WindowBits::cells() const {
  std::vector<Cell> out;
  for (int r = 1; r <= size_; ++r) {
    for (int c = 1; c <= size_; ++c) {
      if (test({r, c})) {
        out.push_back({r, c});
      }
    }
  }
  return out;
}

Pattern::Pattern(WindowBits bits) : bits_(std::move(bits)), length_(bits_.popcount()) {
  if (length_ == 0) {
    throw InvalidArgument("a pattern needs at least one set bit");
  }
  norm_ = std::sqrt(static_cast<double>(length_));
}

std::vector<double> Pattern::unit_vector() const {
  const int n = size();
  std::vector<double> v(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  for (const Cell& cell : bits_.cells()) {
    v[bit_index(cell, n)] = 1.0 / norm_;
  }
  return v;
}

PatternBank::PatternBank(int size, std::vector<WindowBits> grids) : size_(size) {
  check_window_size(size);
  std::set<WindowBits> seen;
  for (auto& grid : grids) {
    if (grid.size() != size) {
      throw InvalidArgument("pattern size does not match bank size");
    }
    if (seen.insert(grid).second) {
      patterns_.emplace_back(std::move(grid));
    }
  }
  if (patterns_.empty()) {
    throw InvalidArgument("a pattern bank needs at least one pattern");
  }

  const auto words = static_cast<std::size_t>(words_per_pattern());
  std::size_t slots = patterns_.size();
  if (words == 1) {
    slots = (slots + 3) / 4 * 4;
  }
  packed_.assign(slots * words, 0);
  inverse_norms_.assign(slots, 0.0);
  for (std::size_t j = 0; j < patterns_.size(); ++j) {
    const auto src = patterns_[j].bits().words();
    std::copy(src.begin(), src.end(), packed_.begin() + static_cast<std::ptrdiff_t>(j * words));
    inverse_norms_[j] = 1.0 / patterns_[j].norm();
  }
}

WindowBits dihedral_image(const WindowBits& bits, int symmetry) {
  if (symmetry < 0 || symmetry > 7) {
    throw InvalidArgument("dihedral symmetry index must be in [0, 7]");
  }
  const int n = bits.size();
  WindowBits out(n);
  for (const Cell& cell : bits.cells()) {
    int r = cell.row - 1;
    int c = cell.col - 1;
    for (int k = 0; k < symmetry % 4; ++k) {
      const int rotated_row = c;
      c = n - 1 - r;
      r = rotated_row;
    }
    if (symmetry >= 4) {
      c = n - 1 - c;
    }
    out.set({r + 1, c + 1});
  }
  return out;
}

PatternBank generate_line_bank(int window) {
  if (window < 3 || window % 2 == 0) {
    throw InvalidArgument("line bank window must be odd and >= 3, got " + std::to_string(window));
  }
  std::vector<Cell> border;
  for (int r = 1; r <= window; ++r) {
    for (int c = 1; c <= window; ++c) {
      if (r == 1 || r == window || c == 1 || c == window) {
        border.push_back({r, c});
      }
    }
  }
  std::vector<WindowBits> grids;
  for (const Cell& from : border) {
    for (const Cell& to : border) {
      if (from == to) {
        continue;
      }
      const WindowBits segment(window, bresenham_segment(from, to, window));
      for (int s = 0; s < 8; ++s) {
        grids.push_back(dihedral_image(segment, s));
      }
    }
  }
  return PatternBank(window, std::move(grids));
}

void dump_bank(const PatternBank& bank, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) {
    throw IoError("cannot create " + directory.string() + ": " + ec.message());
  }
  for (std::size_t j = 0; j < bank.count(); ++j) {
    char name[32];
    std::snprintf(name, sizeof name, "pattern_%04zu.pbm", j);
    const auto cells = bank.patterns()[j].bits().cells();
    save_edge_map(EdgeMap::from_cells(bank.size(), bank.size(), cells), directory / name);
  }
}

}  // namespace edgescore
