#include <polyrefine/cli.hpp>

#include <polyrefine/adaptivity.hpp>
#include <polyrefine/errors.hpp>
#include <polyrefine/geometry.hpp>
#include <polyrefine/mesh_io.hpp>
#include <polyrefine/refinement.hpp>
#include <polyrefine/svg.hpp>
#include <polyrefine/topology.hpp>
#include <polyrefine/validation.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <iostream>
#include <limits>
#include <sstream>

namespace polyrefine {

namespace {

class UsageError : public Error
{
public:
    explicit UsageError(const std::string & what) : Error(what) {}
};

std::vector<Index> parse_index_list(const std::string & text)
{
    std::vector<Index> out;
    std::string token;
    auto flush = [&] {
        if (token.empty())
            return;
        Index v = 0;
        const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
        if (res.ec != std::errc() || res.ptr != token.data() + token.size())
            throw UsageError("invalid element index '" + token + "'");
        out.push_back(v);
        token.clear();
    };
    for (char c : text)
    {
        if (c == ',' || c == ' ' || c == '\t' || c == '\r')
            flush();
        else
            token += c;
    }
    flush();
    return out;
}

std::vector<std::vector<Index>> read_marks_file(const std::string & path)
{
    std::istringstream in(read_text_file(path));
    std::vector<std::vector<Index>> rounds;
    std::string line;
    while (std::getline(in, line))
    {
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#')
            continue;
        rounds.push_back(parse_index_list(line));
    }
    return rounds;
}

struct RefineArgs
{
    std::string in, out, marked, marks_file;
    int steps = 1;
    bool steps_given = false;
};

int run_refine(const RefineArgs & a, std::ostream & out, std::ostream & err)
{
    std::vector<std::vector<Index>> rounds;
    if (!a.marks_file.empty())
    {
        if (!a.marked.empty())
            throw UsageError("--marked and --marks-file are mutually exclusive");
        rounds = read_marks_file(a.marks_file);
        const std::size_t steps = a.steps_given ? static_cast<std::size_t>(a.steps) : rounds.size();
        if (steps > rounds.size())
            throw UsageError(fmt::format("--steps {} but the marks file has {} round(s)", steps, rounds.size()));
        rounds.resize(steps);
    }
    else
    {
        if (a.steps > 1)
            throw UsageError("--steps > 1 requires --marks-file (one line of indices per step)");
        rounds.push_back(parse_index_list(a.marked));
    }

    Mesh mesh = load_mesh(a.in);
    for (std::size_t s = 0; s < rounds.size(); ++s)
        mesh = refine(mesh, rounds[s]);
    save_mesh(mesh, a.out);

    out << fmt::format("refined {} step(s): {} nodes, {} elements\n", rounds.size(), mesh.num_nodes(),
                       mesh.num_elements());
    const ValidationReport conformity = check_conformity(mesh);
    for (const auto & v : conformity.violations)
        err << "warning: " << to_string(v.kind) << ": " << v.message << '\n';
    return exit_ok;
}

struct AdaptArgs
{
    std::string in, prefix;
    double theta = 0.4;
    int steps = 30;
    Index dof_cap = std::numeric_limits<Index>::max();
};

int run_adapt(const AdaptArgs & a, std::ostream & out)
{
    const Mesh initial = load_mesh(a.in);
    AdaptiveOptions options;
    options.theta = a.theta;
    options.max_steps = a.steps;
    options.dof_cap = a.dof_cap;

    const auto records = adaptive_loop(initial, peak_problem(), options);

    std::string csv = "step,N,NT,total_eta,marked_count\n";
    for (const auto & r : records)
    {
        const std::string stem = fmt::format("{}_step{:03d}", a.prefix, r.step);
        const std::span<const double> values(r.solution.data(), static_cast<std::size_t>(r.solution.size()));
        save_mesh(r.mesh, stem + ".json");
        save_field(values, stem + "_solution.json");
        write_svg(r.mesh, stem + ".svg", values);
        csv += fmt::format("{},{},{},{},{}\n", r.step, r.num_nodes, r.num_elements, format_double(r.total_eta),
                           r.marked_count);
        out << fmt::format("step {:3d}: N={} NT={} eta={:.6e} marked={}\n", r.step, r.num_nodes, r.num_elements,
                           r.total_eta, r.marked_count);
    }
    write_text_file(a.prefix + ".csv", csv);
    return exit_ok;
}

int run_quality(const std::string & in, std::ostream & out)
{
    const Mesh mesh = read_mesh(in);
    ValidationReport report = validate_mesh(mesh);

    out << fmt::format("nodes: {}\nelements: {}\n", mesh.num_nodes(), mesh.num_elements());
    if (report.ok())
    {
        const ValidationReport conformity = check_conformity(mesh);
        report.violations.insert(report.violations.end(), conformity.violations.begin(),
                                 conformity.violations.end());

        const MeshTopology topo = build_topology(mesh);
        double min_ratio = std::numeric_limits<double>::infinity(), max_ratio = 0.0;
        std::size_t hanging = 0, with_hanging = 0;
        for (Index e = 0; e < mesh.num_elements(); ++e)
        {
            const Cycle & cycle = mesh.elements[e];
            for (std::size_t j = 0; j < cycle.size(); ++j)
            {
                const double r = distance(mesh.nodes[cycle[j]], mesh.nodes[cycle[(j + 1) % cycle.size()]])
                               / topo.diameter[e];
                min_ratio = std::min(min_ratio, r);
                max_ratio = std::max(max_ratio, r);
            }
            const auto mask = detect_hanging_nodes(e, mesh);
            const auto h = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
            hanging += h;
            with_hanging += h > 0;
        }
        out << fmt::format("edges: {}\n", topo.num_edges());
        out << fmt::format("edge/diameter ratio: min {:.6g} max {:.6g}\n", min_ratio, max_ratio);
        out << fmt::format("hanging nodes: {} (in {} elements)\n", hanging, with_hanging);
    }
    out << report.to_string();
    out << fmt::format("{} violations\n", report.size());
    return report.ok() ? exit_ok : exit_violations;
}

int run_render(const std::string & in, const std::string & path, const std::string & field_path, std::ostream & out)
{
    const Mesh mesh = load_mesh(in);
    if (field_path.empty())
    {
        write_svg(mesh, path);
    }
    else
    {
        const auto field = load_field(field_path);
        write_svg(mesh, path, std::span<const double>(field));
    }
    out << fmt::format("wrote {} polygons to {}\n", mesh.num_elements(), path);
    return exit_ok;
}

} // namespace

int cli_main(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
    CLI::App app{"Local refinement of polygonal meshes with an adaptive virtual element solver", "polyrefine"};
    app.require_subcommand(1);

    RefineArgs ra;
    auto * refine_cmd = app.add_subcommand("refine", "refine marked elements of a mesh");
    refine_cmd->add_option("--in", ra.in, "input mesh")->required();
    refine_cmd->add_option("--out", ra.out, "output mesh")->required();
    refine_cmd->add_option("--marked", ra.marked, "comma-separated element indices");
    auto * steps_opt = refine_cmd->add_option("--steps", ra.steps, "number of refinement rounds")
                           ->check(CLI::PositiveNumber);
    refine_cmd->add_option("--marks-file", ra.marks_file, "one line of marked indices per round");

    AdaptArgs aa;
    auto * adapt_cmd = app.add_subcommand("adapt", "run the adaptive loop on the peak problem");
    adapt_cmd->add_option("--in", aa.in, "initial mesh")->required();
    adapt_cmd->add_option("--theta", aa.theta, "Dörfler parameter")->check(CLI::Range(0.0, 1.0));
    adapt_cmd->add_option("--steps", aa.steps, "number of solves")->check(CLI::NonNegativeNumber);
    adapt_cmd->add_option("--dof-cap", aa.dof_cap, "stop refining at this many nodes");
    adapt_cmd->add_option("--out-prefix", aa.prefix, "prefix of the per-step outputs")->required();

    std::string quality_in;
    auto * quality_cmd = app.add_subcommand("quality", "validate a mesh and print statistics");
    quality_cmd->add_option("--in", quality_in, "mesh")->required();

    std::string render_in, render_out, render_field;
    auto * render_cmd = app.add_subcommand("render", "render a mesh to SVG");
    render_cmd->add_option("--in", render_in, "mesh")->required();
    render_cmd->add_option("--out", render_out, "SVG file")->required();
    render_cmd->add_option("--field", render_field, "per-vertex field file");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try
    {
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp &)
    {
        out << app.help();
        return exit_ok;
    }
    catch (const CLI::ParseError & e)
    {
        err << "error: usage: " << e.what() << '\n';
        return exit_usage;
    }

    try
    {
        if (*refine_cmd)
        {
            ra.steps_given = steps_opt->count() > 0;
            return run_refine(ra, out, err);
        }
        if (*adapt_cmd)
            return run_adapt(aa, out);
        if (*quality_cmd)
            return run_quality(quality_in, out);
        if (*render_cmd)
            return run_render(render_in, render_out, render_field, out);
    }
    catch (const UsageError & e)
    {
        err << "error: usage: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const ParseError & e)
    {
        err << "error: parse: " << e.what() << '\n';
        return exit_parse;
    }
    catch (const ValidationError & e)
    {
        err << "error: validation: " << e.what() << '\n';
        return exit_validation;
    }
    catch (const IoError & e)
    {
        err << "error: io: " << e.what() << '\n';
        return exit_io;
    }
    catch (const Error & e)
    {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
    catch (const std::invalid_argument & e)
    {
        err << "error: usage: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

int cli_main(int argc, char ** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return cli_main(args, std::cout, std::cerr);
}

} // namespace polyrefine
