#include <polyrefine/svg.hpp>

#include <polyrefine/errors.hpp>
#include <polyrefine/mesh_io.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace polyrefine {

namespace {

struct Rgb
{
    int r, g, b;
};

// Endpoints of the ramp, low → high.
constexpr Rgb ramp_low{49, 54, 149};
constexpr Rgb ramp_high{215, 48, 39};

Rgb ramp(double t)
{
    t = std::clamp(t, 0.0, 1.0);
    auto lerp = [t](int a, int b) { return static_cast<int>(std::lround(a + t * (b - a))); };
    return {lerp(ramp_low.r, ramp_high.r), lerp(ramp_low.g, ramp_high.g), lerp(ramp_low.b, ramp_high.b)};
}

} // namespace

std::string render_svg(const Mesh & mesh, std::optional<std::span<const double>> field)
{
    if (field && field->size() != mesh.num_nodes())
        throw IoError("field has " + std::to_string(field->size()) + " values but the mesh has "
                      + std::to_string(mesh.num_nodes()) + " nodes");

    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    if (!mesh.nodes.empty())
    {
        x0 = x1 = mesh.nodes[0].x;
        y0 = y1 = mesh.nodes[0].y;
        for (const auto & p : mesh.nodes)
        {
            x0 = std::min(x0, p.x); x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y); y1 = std::max(y1, p.y);
        }
    }
    const double diag = std::max(std::hypot(x1 - x0, y1 - y0), 1e-300);
    const double margin = 0.02 * std::max(x1 - x0, y1 - y0);
    const double stroke = 0.002 * diag;

    double lo = 0.0, hi = 0.0;
    if (field && !field->empty())
    {
        const auto [mn, mx] = std::minmax_element(field->begin(), field->end());
        lo = *mn;
        hi = *mx;
    }

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
                       "viewBox=\"{:.9g} {:.9g} {:.9g} {:.9g}\">\n",
                       x0 - margin, -(y1 + margin), (x1 - x0) + 2 * margin, (y1 - y0) + 2 * margin);
    out += fmt::format("<g stroke=\"black\" stroke-width=\"{:.9g}\" stroke-linejoin=\"round\">\n", stroke);

    for (const Cycle & cycle : mesh.elements)
    {
        std::string fill = "none";
        if (field)
        {
            double mean = 0.0;
            for (Index v : cycle)
                mean += (*field)[v];
            mean /= static_cast<double>(cycle.size());
            const Rgb c = ramp(hi > lo ? (mean - lo) / (hi - lo) : 0.5);
            fill = fmt::format("#{:02x}{:02x}{:02x}", c.r, c.g, c.b);
        }
        out += "<polygon points=\"";
        for (std::size_t j = 0; j < cycle.size(); ++j)
        {
            const Point & p = mesh.nodes[cycle[j]];
            out += fmt::format("{}{:.9g},{:.9g}", j ? " " : "", p.x, -p.y);
        }
        out += fmt::format("\" fill=\"{}\"/>\n", fill);
    }
    out += "</g>\n</svg>\n";
    return out;
}

void write_svg(const Mesh & mesh, const std::filesystem::path & path, std::optional<std::span<const double>> field)
{
    write_text_file(path, render_svg(mesh, field));
}

} // namespace polyrefine
