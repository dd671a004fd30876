#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <yaml-cpp/yaml.h>

#include "radchem/lab.hpp"

namespace radchem
{

void SweepPlan::validate() const
{
    if (alphas.empty())
    {
        throw ConfigError("sweep plan needs at least one alpha");
    }
    if (!std::is_sorted(alphas.begin(), alphas.end()))
    {
        throw ConfigError("sweep alphas must be sorted");
    }
    if (variants.empty())
    {
        throw ConfigError("sweep plan needs at least one data variant");
    }
    if (workers < 1)
    {
        throw ConfigError("sweep needs at least one worker");
    }
    for (double alpha : alphas)
    {
        for (auto const& variant : variants)
        {
            case_config(*this, alpha, variant);
        }
    }
}

namespace
{
ConfigEntries entries_of(YAML::Node const& node, char const* what)
{
    if (!node)
    {
        return {};
    }
    if (!node.IsMap())
    {
        throw ConfigError(fmt::format("plan key '{}' must be a mapping", what));
    }
    YAML::Emitter emitter;
    emitter << node;
    return parse_entries(emitter.c_str());
}
}  // namespace

SweepPlan parse_plan(std::string const& text)
{
    YAML::Node root;
    try
    {
        root = YAML::Load(text);
    }
    catch (YAML::Exception const& e)
    {
        throw ConfigError(fmt::format("malformed plan: {}", e.what()));
    }
    if (!root.IsMap())
    {
        throw ConfigError("plan must be a mapping");
    }
    for (auto const& item : root)
    {
        auto const key = item.first.as<std::string>();
        if (key != "base" && key != "alpha" && key != "variants"
            && key != "overrides" && key != "workers")
        {
            throw ConfigError(fmt::format("unknown plan key '{}'", key));
        }
    }

    SweepPlan plan;
    plan.base = entries_of(root["base"], "base");
    plan.overrides = entries_of(root["overrides"], "overrides");
    try
    {
        if (auto alpha = root["alpha"]; alpha && alpha.IsSequence())
        {
            for (auto const& a : alpha)
                plan.alphas.push_back(a.as<double>());
        }
        else
        {
            throw ConfigError("plan key 'alpha' must be a list of numbers");
        }
        if (auto workers = root["workers"])
        {
            plan.workers = workers.as<int>();
        }
    }
    catch (YAML::Exception const& e)
    {
        throw ConfigError(fmt::format("malformed plan value: {}", e.what()));
    }
    auto variants = root["variants"];
    if (!variants || !variants.IsMap())
    {
        throw ConfigError("plan key 'variants' must map ids to overrides");
    }
    for (auto const& item : variants)
    {
        DataVariant variant;
        variant.id = item.first.as<std::string>();
        variant.entries = entries_of(item.second, "variants");
        plan.variants.push_back(std::move(variant));
    }
    plan.validate();
    return plan;
}

SweepPlan load_plan(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw std::ios_base::failure(
            fmt::format("cannot open plan '{}'", path.string()));
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_plan(buffer.str());
}

RunConfig case_config(SweepPlan const& plan,
                      double alpha,
                      DataVariant const& data)
{
    ConfigEntries entries = plan.base;
    for (auto const& [key, value] : plan.overrides)
        entries[key] = value;
    for (auto const& [key, value] : data.entries)
        entries[key] = value;
    entries["alpha"] = fmt::format("{}", alpha);
    try
    {
        return config_from_entries(entries);
    }
    catch (ConfigError const& e)
    {
        throw ConfigError(fmt::format("case ({}, {}): {}", alpha, data.id,
                                      e.what()));
    }
}

std::vector<SweepRow> run_sweep(SweepPlan const& plan, CaseRunner const& runner)
{
    plan.validate();

    struct Case
    {
        double alpha;
        DataVariant const* data;
    };
    std::vector<Case> cases;
    for (double alpha : plan.alphas)
    {
        for (auto const& variant : plan.variants)
            cases.push_back({alpha, &variant});
    }
    std::stable_sort(cases.begin(), cases.end(), [](Case const& a, Case const& b) {
        if (a.alpha != b.alpha)
            return a.alpha < b.alpha;
        return a.data->id < b.data->id;
    });

    // Each slot is written by exactly one worker.
    std::vector<SweepRow> rows(cases.size());
    auto run_one = [&](std::size_t index) {
        Case const& c = cases[index];
        SweepRow& row = rows[index];
        row.alpha = c.alpha;
        row.data_id = c.data->id;
        try
        {
            RunConfig config = case_config(plan, c.alpha, *c.data);
            CaseReport report = runner ? runner(config) : run_case(config);
            row.verdict = report.verdict.kind;
            row.detail = report.verdict.detail;
            row.initial_linf = report.initial_linf;
            row.peak_linf = report.peak_linf;
            row.terminal_t = report.terminal_t;
            row.steps = report.steps;
            row.wall_ms = report.wall_ms;
        }
        catch (...)
        {
            row.verdict = VerdictKind::tolerance_failure;
            row.detail = "worker fault";
        }
    };

    auto const workers = std::min<std::size_t>(
        static_cast<std::size_t>(plan.workers), cases.size());
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < cases.size(); ++i)
            run_one(i);
        return rows;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
    {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < cases.size(); i += workers)
                run_one(i);
        });
    }
    pool.clear();  // joins
    return rows;
}

void write_sweep_csv(std::ostream& os,
                     std::vector<SweepRow> const& rows,
                     Timing timing)
{
    os << "alpha,data_id,verdict,peak_linf,terminal_t,steps,wall_ms\n";
    for (auto const& row : rows)
    {
        double const wall = timing == Timing::include ? row.wall_ms : 0.0;
        fmt::print(os, "{},{},{},{},{},{},{:.3f}\n", row.alpha,
                   row.data_id, to_string(row.verdict), row.peak_linf,
                   row.terminal_t, row.steps, wall);
    }
}

}  // namespace radchem
