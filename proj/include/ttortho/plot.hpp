#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ttortho/experiment.hpp"

namespace ttortho {

enum class PlotKind { loo, max_rank, compression_ratio, compression_gain };

std::string_view plot_kind_name(PlotKind kind);

/// 800x600 SVG with a log10 y-axis. Rows whose delta differs from `delta` or that carry an
/// error are ignored. LOO plots add the delta line and u*kappa, u*kappa^2 when the rows have
/// kappa; otherwise the squared MGS loss of orthogonality stands in for u*kappa^2.
/// Throws SchemaError when nothing is left to draw.
std::string render_plot(PlotKind kind, double delta, std::span<const CsvRecord> records);

/// One file per (kind, delta) named "<kind>_delta<delta>.svg"; returns the paths written.
std::vector<std::filesystem::path> write_plots(std::span<const CsvRecord> records,
                                               const std::filesystem::path& dir);

}  // namespace ttortho
