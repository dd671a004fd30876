#include "radchem/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "radchem/grid.hpp"

namespace radchem
{
namespace
{
std::set<std::string> const kKnownKeys{
    "n",           "R",           "alpha",          "kappa",
    "M",           "initial.kind", "initial.mass",  "initial.width",
    "initial.center", "initial.r_lo", "initial.r_hi", "cells",
    "t_end",       "cfl_safety",  "u_max_threshold", "dt_min",
    "output_stride", "lp"};

std::string const& require(ConfigEntries const& entries, std::string const& key)
{
    auto it = entries.find(key);
    if (it == entries.end())
    {
        throw ConfigError(fmt::format("missing required key '{}'", key));
    }
    return it->second;
}

double to_double(std::string const& key, std::string const& text)
{
    double value = 0.0;
    auto const* first = text.data();
    auto const* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
    {
        throw ConfigError(
            fmt::format("key '{}': expected a number, got '{}'", key, text));
    }
    return value;
}

int to_int(std::string const& key, std::string const& text)
{
    int value = 0;
    auto const* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), last, value);
    if (ec != std::errc{} || ptr != last)
    {
        throw ConfigError(
            fmt::format("key '{}': expected an integer, got '{}'", key, text));
    }
    return value;
}

double get_double(ConfigEntries const& entries, std::string const& key)
{
    return to_double(key, require(entries, key));
}

std::optional<double>
get_optional(ConfigEntries const& entries, std::string const& key)
{
    auto it = entries.find(key);
    if (it == entries.end())
    {
        return std::nullopt;
    }
    return to_double(key, it->second);
}

std::string num(double value)
{
    return fmt::format("{}", value);
}
}  // namespace

ConfigEntries parse_entries(std::string const& text)
{
    YAML::Node root;
    try
    {
        root = YAML::Load(text);
    }
    catch (YAML::Exception const& e)
    {
        throw ConfigError(fmt::format("malformed config: {}", e.what()));
    }
    ConfigEntries entries;
    if (root.IsNull())
    {
        return entries;
    }
    if (!root.IsMap())
    {
        throw ConfigError("config must be a flat key/value mapping");
    }
    for (auto const& item : root)
    {
        auto key = item.first.as<std::string>();
        YAML::Node const& value = item.second;
        if (value.IsScalar())
        {
            entries[key] = value.Scalar();
        }
        else if (value.IsSequence())
        {
            std::string joined;
            for (auto const& element : value)
            {
                if (!element.IsScalar())
                {
                    throw ConfigError(
                        fmt::format("key '{}': list items must be scalars", key));
                }
                if (!joined.empty())
                    joined += ',';
                joined += element.Scalar();
            }
            entries[key] = joined;
        }
        else
        {
            throw ConfigError(
                fmt::format("key '{}': nested values are not allowed", key));
        }
    }
    return entries;
}

RunConfig config_from_entries(ConfigEntries const& entries)
{
    for (auto const& [key, value] : entries)
    {
        if (!kKnownKeys.contains(key))
        {
            throw ConfigError(fmt::format("unknown key '{}'", key));
        }
    }

    RunConfig config;
    config.geometry.n = to_int("n", require(entries, "n"));
    config.geometry.R = get_double(entries, "R");
    config.diffusion.alpha = get_double(entries, "alpha");
    config.diffusion.kappa = get_double(entries, "kappa");
    config.boundary.M = get_double(entries, "M");
    config.cells = to_int("cells", require(entries, "cells"));
    config.t_end = get_double(entries, "t_end");

    std::string const& kind = require(entries, "initial.kind");
    double const mass = get_double(entries, "initial.mass");
    if (kind == "constant")
    {
        if (config.geometry.n >= 1 && config.geometry.R > 0.0)
        {
            config.initial
                = initial::Constant{mass / ball_volume(config.geometry)};
        }
    }
    else if (kind == "gaussian")
    {
        initial::GaussianBump bump;
        bump.mass = mass;
        bump.width = get_optional(entries, "initial.width")
                         .value_or(config.geometry.R / 8.0);
        bump.center = get_optional(entries, "initial.center").value_or(0.0);
        config.initial = bump;
    }
    else if (kind == "annulus")
    {
        initial::Annulus ring;
        ring.mass = mass;
        ring.r_lo = get_double(entries, "initial.r_lo");
        ring.r_hi = get_double(entries, "initial.r_hi");
        config.initial = ring;
    }
    else
    {
        throw ConfigError(fmt::format(
            "key 'initial.kind': expected constant, gaussian or annulus, got '{}'",
            kind));
    }

    if (auto v = get_optional(entries, "cfl_safety"))
        config.cfl_safety = *v;
    config.u_max_threshold = get_optional(entries, "u_max_threshold");
    config.dt_min = get_optional(entries, "dt_min");
    if (auto it = entries.find("output_stride"); it != entries.end())
        config.output_stride = to_int("output_stride", it->second);
    if (auto it = entries.find("lp"); it != entries.end())
    {
        config.lp_exponents.clear();
        std::stringstream stream(it->second);
        std::string item;
        while (std::getline(stream, item, ','))
        {
            auto const b = item.find_first_not_of(" \t");
            auto const e = item.find_last_not_of(" \t");
            if (b == std::string::npos)
                continue;
            config.lp_exponents.push_back(
                to_double("lp", item.substr(b, e - b + 1)));
        }
    }

    config.validate();
    return config;
}

RunConfig parse_config(std::string const& text)
{
    return config_from_entries(parse_entries(text));
}

RunConfig load_config(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw std::ios_base::failure(
            fmt::format("cannot open config '{}'", path.string()));
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

ConfigEntries config_to_entries(RunConfig const& config)
{
    ConfigEntries entries;
    entries["n"] = std::to_string(config.geometry.n);
    entries["R"] = num(config.geometry.R);
    entries["alpha"] = num(config.diffusion.alpha);
    entries["kappa"] = num(config.diffusion.kappa);
    entries["M"] = num(config.boundary.M);
    entries["initial.kind"] = initial_kind_name(config.initial);
    if (auto const* c = std::get_if<initial::Constant>(&config.initial))
    {
        entries["initial.mass"] = num(c->level * ball_volume(config.geometry));
    }
    else if (auto const* g = std::get_if<initial::GaussianBump>(&config.initial))
    {
        entries["initial.mass"] = num(g->mass);
        entries["initial.width"] = num(g->width);
        entries["initial.center"] = num(g->center);
    }
    else
    {
        auto const& a = std::get<initial::Annulus>(config.initial);
        entries["initial.mass"] = num(a.mass);
        entries["initial.r_lo"] = num(a.r_lo);
        entries["initial.r_hi"] = num(a.r_hi);
    }
    entries["cells"] = std::to_string(config.cells);
    entries["t_end"] = num(config.t_end);
    entries["cfl_safety"] = num(config.cfl_safety);
    if (config.u_max_threshold)
        entries["u_max_threshold"] = num(*config.u_max_threshold);
    if (config.dt_min)
        entries["dt_min"] = num(*config.dt_min);
    entries["output_stride"] = std::to_string(config.output_stride);
    std::string lp;
    for (double p : config.lp_exponents)
    {
        if (!lp.empty())
            lp += ", ";
        lp += num(p);
    }
    entries["lp"] = lp;
    return entries;
}

std::string format_config(RunConfig const& config)
{
    std::string out;
    for (auto const& [key, value] : config_to_entries(config))
    {
        if (key == "lp")
            out += fmt::format("{}: [{}]\n", key, value);
        else
            out += fmt::format("{}: {}\n", key, value);
    }
    return out;
}

}  // namespace radchem
