#pragma once

#include <polyrefine/mesh.hpp>

#include <filesystem>
#include <optional>
#include <span>
#include <string>

namespace polyrefine {

/**
 * SVG 1.1 document with one <polygon> per element. The view box is the
 * mesh bounding box plus a 2% margin, the y axis points up and the stroke
 * width is 0.2% of the box diagonal. With a per-vertex field, each element
 * is filled by the mean of its vertex values on a linear blue-to-red ramp.
 */
std::string render_svg(const Mesh & mesh, std::optional<std::span<const double>> field = std::nullopt);

/// Throws IoError.
void write_svg(const Mesh & mesh, const std::filesystem::path & path,
               std::optional<std::span<const double>> field = std::nullopt);

} // namespace polyrefine
