#pragma once

#include <filesystem>
#include <optional>

#include "edgescore/raster.hpp"

namespace edgescore {

struct GrayLoadOptions {
  /// Accept colour input and reduce it with Rec. 601 luma weights.
  bool luma = false;
};

/// Reads PGM (P2/P5), PNG, and with `luma` also PPM (P3/P6) or colour PNG.
/// Values are divided by the format's maximum level.
GrayImage load_gray(const std::filesystem::path& path, GrayLoadOptions options = {});

/// Reads a bilevel raster. PBM (P1/P4): bit 1 is an edge. PGM/PNG whose only
/// levels are 0 and the maximum: the maximum is an edge. Any other grayscale
/// input requires `threshold`, and then a pixel is an edge iff value/max > threshold.
EdgeMap load_edge_map(const std::filesystem::path& path,
                      std::optional<double> threshold = std::nullopt);

/// Writes PBM P4. Edge pixels are stored as 1.
void save_edge_map(const EdgeMap& map, const std::filesystem::path& path);

/// Writes 8-bit PGM P5, rounding value*255.
void save_gray(const GrayImage& image, const std::filesystem::path& path);

}  // namespace edgescore
