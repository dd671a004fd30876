#include "radchem/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "radchem/config.hpp"
#include "radchem/lab.hpp"
#include "radchem/plot.hpp"

namespace radchem
{
namespace
{
namespace fs = std::filesystem;

class IoError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

std::ofstream open_output(fs::path const& path)
{
    std::ofstream out(path);
    if (!out)
    {
        throw IoError(fmt::format("cannot write '{}'", path.string()));
    }
    return out;
}

void make_dir(fs::path const& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
    {
        throw IoError(fmt::format("cannot create directory '{}'", dir.string()));
    }
}

template<class F>
auto with_input(fs::path const& path, F&& load)
{
    if (!fs::exists(path))
    {
        throw IoError(fmt::format("no such file '{}'", path.string()));
    }
    try
    {
        return load(path);
    }
    catch (std::ios_base::failure const& e)
    {
        throw IoError(e.what());
    }
}

void write_snapshot(fs::path const& path, SimState const& state)
{
    auto out = open_output(path);
    write_profile_csv(out, state.u, state.elliptic.v, "v");
}

int simulate(fs::path const& config_path, fs::path const& out_dir,
             std::ostream& err)
{
    RunConfig config = with_input(config_path, load_config);
    make_dir(out_dir);
    CaseReport report = run_case(config);

    write_snapshot(out_dir / "snapshot_initial.csv", report.initial_state);
    if (report.steps > 0)
    {
        write_snapshot(out_dir / "snapshot_final.csv", report.final_state);
    }
    {
        auto out = open_output(out_dir / "series.csv");
        write_series_csv(out, config, report.series);
    }
    {
        auto out = open_output(out_dir / "report.txt");
        write_case_report(out, report);
    }
    fmt::print(err, "simulate: {} after {} steps (t = {:.6g}, peak ||u||_inf = {:.6g})\n",
               to_string(report.verdict.kind), report.steps, report.terminal_t,
               report.peak_linf);
    return report.verdict.kind == VerdictKind::tolerance_failure
               ? kExitToleranceFailure
               : kExitOk;
}

int verify(fs::path const& config_path, std::ostream& out, std::ostream& err)
{
    RunConfig config = with_input(config_path, load_config);
    Ledger ledger = verify_suite(config);
    write_ledger(out, ledger);
    bool const ok = ledger.all_pass();
    fmt::print(err, "verify: {}\n", ok ? "all checks passed" : "FAILED");
    return ok ? kExitOk : kExitToleranceFailure;
}

int sweep(fs::path const& plan_path, fs::path const& out_dir,
          std::optional<int> workers, bool timing, std::ostream& err)
{
    SweepPlan plan = with_input(plan_path, load_plan);
    if (workers)
    {
        plan.workers = *workers;
    }
    make_dir(out_dir);
    auto rows = run_sweep(plan);
    {
        auto out = open_output(out_dir / "sweep.csv");
        write_sweep_csv(out, rows, timing ? Timing::include : Timing::omit);
    }
    bool failed = false;
    for (auto const& row : rows)
    {
        fmt::print(err, "sweep: alpha={:g} data={} -> {}{}\n", row.alpha,
                   row.data_id, to_string(row.verdict),
                   row.detail.empty() ? "" : " (" + row.detail + ")");
        failed = failed || row.verdict == VerdictKind::tolerance_failure;
    }
    return failed ? kExitToleranceFailure : kExitOk;
}

int plot(fs::path const& csv_path, std::string const& cols,
         fs::path const& out_path, std::ostream& err)
{
    Table table = with_input(csv_path, [](fs::path const& p) {
        std::ifstream in(p);
        if (!in)
            throw IoError(fmt::format("cannot read '{}'", p.string()));
        return read_csv_table(in);
    });
    std::vector<std::string> columns;
    std::stringstream stream(cols);
    std::string name;
    while (std::getline(stream, name, ','))
    {
        if (!name.empty())
            columns.push_back(name);
    }
    if (columns.empty())
    {
        throw PlotError("no columns requested");
    }
    for (auto const& c : columns)
    {
        table.column(c);
    }
    auto out = open_output(out_path);
    render_svg(out, table, columns);
    fmt::print(err, "plot: wrote {} ({} rows)\n", out_path.string(), table.rows());
    return kExitOk;
}
}  // namespace

int run_cli(int argc, char const* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Radial chemotaxis-consumption laboratory", "radchem"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    auto* sim = app.add_subcommand("simulate", "Run one case and write CSV/report");
    sim->add_option("--config", config_path, "Run configuration")->required();
    sim->add_option("--out", out_dir, "Output directory")->required();

    std::string plan_path;
    std::optional<int> workers;
    bool no_timing = false;
    auto* sw = app.add_subcommand("sweep", "Run an alpha sweep");
    sw->add_option("--plan", plan_path, "Sweep plan")->required();
    sw->add_option("--out", out_dir, "Output directory")->required();
    sw->add_option("--workers", workers, "Worker threads")
        ->check(CLI::PositiveNumber);
    sw->add_flag("--no-timing", no_timing,
                 "Write wall_ms as 0 for byte-reproducible tables");

    auto* ver = app.add_subcommand("verify", "Run the invariant suite");
    ver->add_option("--config", config_path, "Run configuration")->required();

    std::string csv_path;
    std::string cols;
    std::string svg_path;
    auto* pl = app.add_subcommand("plot", "Render CSV columns to SVG");
    pl->add_option("--csv", csv_path, "Input CSV")->required();
    pl->add_option("--cols", cols, "Comma-separated columns")->required();
    pl->add_option("--out", svg_path, "Output SVG")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::CallForHelp const& e)
    {
        out << app.help();
        return kExitOk;
    }
    catch (CLI::ParseError const& e)
    {
        fmt::print(err, "error: {}\n", e.what());
        return kExitConfigError;
    }

    try
    {
        if (*sim)
            return simulate(config_path, out_dir, err);
        if (*sw)
            return sweep(plan_path, out_dir, workers, !no_timing, err);
        if (*ver)
            return verify(config_path, out, err);
        return plot(csv_path, cols, svg_path, err);
    }
    catch (ConfigError const& e)
    {
        fmt::print(err, "config error: {}\n", e.what());
        return kExitConfigError;
    }
    catch (PlotError const& e)
    {
        fmt::print(err, "plot error: {}\n", e.what());
        return kExitConfigError;
    }
    catch (IoError const& e)
    {
        fmt::print(err, "i/o error: {}\n", e.what());
        return kExitIoError;
    }
    catch (std::ios_base::failure const& e)
    {
        fmt::print(err, "i/o error: {}\n", e.what());
        return kExitIoError;
    }
    catch (fs::filesystem_error const& e)
    {
        fmt::print(err, "i/o error: {}\n", e.what());
        return kExitIoError;
    }
    catch (std::exception const& e)
    {
        // Solver invariants broken outside a step (e.g. singular system).
        fmt::print(err, "numerical failure: {}\n", e.what());
        return kExitToleranceFailure;
    }
}

}  // namespace radchem
