#pragma once

#include "edgescore/pattern_bank.hpp"
#include "edgescore/raster.hpp"

namespace edgescore {

/// The w x w neighbourhood b_(k) of an edge pixel, zero-padded outside the image.
struct EdgeWindow {
  Cell center;
  WindowBits bits;
};

/// Throws InvalidArgument when `center` is outside the map or not an edge pixel,
/// or when `size` is not odd and positive.
EdgeWindow extract_window(const EdgeMap& map, Cell center, int size);

/// max_j <b_j/||b_j||, b_(k)/||b_(k)||>, in [0, 1]. The bank and window sizes
/// must agree and the window must contain at least one edge pixel.
double local_equilibrium(const WindowBits& window, const PatternBank& bank);
inline double local_equilibrium(const EdgeWindow& window, const PatternBank& bank) {
  return local_equilibrium(window.bits, bank);
}

/// Mean of the local equilibrium over every edge pixel.
/// Throws EmptyMapError for a map without edge pixels.
double equilibrium(const EdgeMap& map, const PatternBank& bank);

}  // namespace edgescore
