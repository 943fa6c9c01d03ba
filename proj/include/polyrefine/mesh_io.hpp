#pragma once

#include <polyrefine/errors.hpp>
#include <polyrefine/mesh.hpp>
#include <polyrefine/validation.hpp>

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polyrefine {

/// Raised by load_mesh when the file parses but the mesh is not refinable.
class ValidationError : public Error
{
public:
    explicit ValidationError(ValidationReport report);
    const ValidationReport & report() const { return report_; }

private:
    ValidationReport report_;
};

/*
 * Mesh files are JSON documents:
 *
 *   {
 *     "format": "polyrefine-mesh",
 *     "version": 1,
 *     "nodes": [[x, y], ...],
 *     "elements": [[i, j, k, ...], ...]
 *   }
 *
 * Indices are 0-based. Coordinates are written as the shortest decimal
 * that reads back to the same double.
 */
inline constexpr int mesh_format_version = 1;

std::string format_mesh(const Mesh & mesh);

/// Throws ParseError on malformed documents; does not validate.
Mesh parse_mesh(std::string_view text);

/// Reads and parses without validation. Throws IoError or ParseError.
Mesh read_mesh(const std::filesystem::path & path);

/// read_mesh followed by validate_mesh; throws ValidationError on violations.
Mesh load_mesh(const std::filesystem::path & path);

/// Throws IoError.
void save_mesh(const Mesh & mesh, const std::filesystem::path & path);

/// Per-vertex scalar files: {"format": "polyrefine-field", "version": 1, "values": [...]}.
std::string format_field(std::span<const double> values);
std::vector<double> parse_field(std::string_view text);
std::vector<double> load_field(const std::filesystem::path & path);
void save_field(std::span<const double> values, const std::filesystem::path & path);

/// Shortest round-trip decimal for a finite double, always containing '.' or an exponent.
std::string format_double(double value);

std::string read_text_file(const std::filesystem::path & path);
void write_text_file(const std::filesystem::path & path, std::string_view text);

} // namespace polyrefine
