#pragma once

#include <filesystem>
#include <iosfwd>

#include "edgescore/sweep.hpp"

namespace edgescore {

/// Header: parameter names, edge_count, q, H, C[, q_GT, pratt]. Values are
/// printed with 17 significant digits so they reparse to the same doubles.
void write_csv(const SweepResult& result, std::ostream& out);
void emit_csv(const SweepResult& result, const std::filesystem::path& path);

/// SVG with q, H and C polylines against the swept parameter and a marker on
/// the best record.
void write_svg(const SweepResult& result, std::ostream& out);
void emit_plot(const SweepResult& result, const std::filesystem::path& path);

}  // namespace edgescore
