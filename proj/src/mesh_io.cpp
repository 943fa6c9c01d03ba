#include <polyrefine/mesh_io.hpp>

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace polyrefine {

namespace {

constexpr const char * mesh_format_tag = "polyrefine-mesh";
constexpr const char * field_format_tag = "polyrefine-field";

std::string summarize(const ValidationReport & report)
{
    std::string msg = "mesh failed validation with " + std::to_string(report.size()) + " violation(s)";
    if (!report.ok())
        msg += "; first: " + report.violations.front().message;
    return msg;
}

void check_header(const nlohmann::json & doc, const char * tag)
{
    if (!doc.is_object())
        throw ParseError("document is not a JSON object");
    if (!doc.contains("format") || doc["format"] != tag)
        throw ParseError(std::string("missing or wrong \"format\" (expected \"") + tag + "\")");
    if (!doc.contains("version") || !doc["version"].is_number_integer())
        throw ParseError("missing integer \"version\"");
    if (doc["version"].get<int>() != mesh_format_version)
        throw ParseError("unsupported version " + doc["version"].dump());
}

nlohmann::json parse_json(std::string_view text)
{
    try
    {
        return nlohmann::json::parse(text);
    }
    catch (const nlohmann::json::parse_error & e)
    {
        throw ParseError(e.what());
    }
}

double number_at(const nlohmann::json & v, const std::string & where)
{
    if (!v.is_number())
        throw ParseError(where + " is not a number");
    return v.get<double>();
}

} // namespace

ValidationError::ValidationError(ValidationReport report)
    : Error(summarize(report)), report_(std::move(report))
{
}

std::string format_double(double value)
{
    if (!std::isfinite(value))
        throw IoError("cannot serialize non-finite value");
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    std::string s(buf, res.ptr);
    if (s.find_first_of(".e") == std::string::npos)
        s += ".0";
    return s;
}

std::string format_mesh(const Mesh & mesh)
{
    std::ostringstream os;
    os << "{\n  \"format\": \"" << mesh_format_tag << "\",\n  \"version\": " << mesh_format_version
       << ",\n  \"nodes\": [";
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
        os << (i ? ",\n" : "\n") << "    [" << format_double(mesh.nodes[i].x) << ", "
           << format_double(mesh.nodes[i].y) << "]";
    os << (mesh.nodes.empty() ? "" : "\n  ") << "],\n  \"elements\": [";
    for (std::size_t e = 0; e < mesh.elements.size(); ++e)
    {
        os << (e ? ",\n" : "\n") << "    [";
        for (std::size_t j = 0; j < mesh.elements[e].size(); ++j)
            os << (j ? ", " : "") << mesh.elements[e][j];
        os << "]";
    }
    os << (mesh.elements.empty() ? "" : "\n  ") << "]\n}\n";
    return os.str();
}

Mesh parse_mesh(std::string_view text)
{
    const nlohmann::json doc = parse_json(text);
    check_header(doc, mesh_format_tag);
    if (!doc.contains("nodes") || !doc["nodes"].is_array())
        throw ParseError("missing \"nodes\" array");
    if (!doc.contains("elements") || !doc["elements"].is_array())
        throw ParseError("missing \"elements\" array");

    Mesh mesh;
    const auto & nodes = doc["nodes"];
    for (std::size_t i = 0; i < nodes.size(); ++i)
    {
        const auto & p = nodes[i];
        const std::string where = "node " + std::to_string(i);
        if (!p.is_array() || p.size() != 2)
            throw ParseError(where + " is not an [x, y] pair");
        mesh.nodes.push_back({number_at(p[0], where), number_at(p[1], where)});
    }
    const auto & elements = doc["elements"];
    for (std::size_t e = 0; e < elements.size(); ++e)
    {
        const auto & row = elements[e];
        if (!row.is_array())
            throw ParseError("element " + std::to_string(e) + " is not an array");
        Cycle cycle;
        for (const auto & v : row)
        {
            if (!v.is_number_unsigned())
                throw ParseError("element " + std::to_string(e) + " has a non-integer or negative index");
            cycle.push_back(v.get<Index>());
        }
        mesh.elements.push_back(std::move(cycle));
    }
    return mesh;
}

std::string read_text_file(const std::filesystem::path & path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path & path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
        throw IoError("write to " + path.string() + " failed");
}

Mesh read_mesh(const std::filesystem::path & path)
{
    return parse_mesh(read_text_file(path));
}

Mesh load_mesh(const std::filesystem::path & path)
{
    Mesh mesh = read_mesh(path);
    ValidationReport report = validate_mesh(mesh);
    if (!report.ok())
        throw ValidationError(std::move(report));
    return mesh;
}

void save_mesh(const Mesh & mesh, const std::filesystem::path & path)
{
    write_text_file(path, format_mesh(mesh));
}

std::string format_field(std::span<const double> values)
{
    std::ostringstream os;
    os << "{\n  \"format\": \"" << field_format_tag << "\",\n  \"version\": " << mesh_format_version
       << ",\n  \"values\": [";
    for (std::size_t i = 0; i < values.size(); ++i)
        os << (i ? ",\n" : "\n") << "    " << format_double(values[i]);
    os << (values.empty() ? "" : "\n  ") << "]\n}\n";
    return os.str();
}

std::vector<double> parse_field(std::string_view text)
{
    const nlohmann::json doc = parse_json(text);
    check_header(doc, field_format_tag);
    if (!doc.contains("values") || !doc["values"].is_array())
        throw ParseError("missing \"values\" array");
    std::vector<double> out;
    for (std::size_t i = 0; i < doc["values"].size(); ++i)
        out.push_back(number_at(doc["values"][i], "value " + std::to_string(i)));
    return out;
}

std::vector<double> load_field(const std::filesystem::path & path)
{
    return parse_field(read_text_file(path));
}

void save_field(std::span<const double> values, const std::filesystem::path & path)
{
    write_text_file(path, format_field(values));
}

} // namespace polyrefine
