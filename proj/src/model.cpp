#include "radchem/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "radchem/grid.hpp"

namespace radchem
{

double DiffusionLaw::eval(double xi) const
{
    if (!(xi >= 0.0))
    {
        throw std::domain_error(
            fmt::format("diffusion law evaluated at negative density {}", xi));
    }
    return kappa * std::pow(xi + 1.0, -alpha);
}

double DiffusionLaw::derivative(double xi) const
{
    if (!(xi >= 0.0))
    {
        throw std::domain_error(
            fmt::format("diffusion law evaluated at negative density {}", xi));
    }
    return -alpha * kappa * std::pow(xi + 1.0, -alpha - 1.0);
}

DiffusionLaw make_diffusion_law(double alpha, double kappa)
{
    if (!std::isfinite(alpha))
    {
        throw ConfigError("alpha must be finite");
    }
    if (!(kappa > 0.0) || !std::isfinite(kappa))
    {
        throw ConfigError(fmt::format("kappa must be positive, got {}", kappa));
    }
    return DiffusionLaw{alpha, kappa};
}

double unit_ball_volume(int n)
{
    double half = 0.5 * n;
    return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

double surface_coefficient(int n)
{
    return n * unit_ball_volume(n);
}

double ball_volume(Geometry const& geometry)
{
    return unit_ball_volume(geometry.n) * std::pow(geometry.R, geometry.n);
}

std::string initial_kind_name(InitialData const& data)
{
    struct Visitor
    {
        std::string operator()(initial::Constant const&) const
        {
            return "constant";
        }
        std::string operator()(initial::GaussianBump const&) const
        {
            return "gaussian";
        }
        std::string operator()(initial::Annulus const&) const
        {
            return "annulus";
        }
    };
    return std::visit(Visitor{}, data);
}

namespace
{
// 3-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 3> kGaussWeights{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
std::array<double, 3> const kGaussNodes{-std::sqrt(0.6), 0.0, std::sqrt(0.6)};

template<class F>
RadialProfile sample_shape(F&& shape, double mass, RadialGrid const& grid,
                           GridHandle handle)
{
    if (!(mass >= 0.0) || !std::isfinite(mass))
    {
        throw ConfigError(
            fmt::format("initial mass must be nonnegative, got {}", mass));
    }
    RadialProfile profile(std::move(handle));
    auto faces = grid.faces();
    auto volumes = grid.volumes();
    double const omega = surface_coefficient(grid.dimension());
    int const n = grid.dimension();
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        double const mid = 0.5 * (faces[i] + faces[i + 1]);
        double const half = 0.5 * (faces[i + 1] - faces[i]);
        double cell = 0.0;
        for (std::size_t q = 0; q < 3; ++q)
        {
            double const r = mid + half * kGaussNodes[q];
            cell += kGaussWeights[q] * shape(r) * std::pow(r, n - 1);
        }
        profile[i] = std::max(0.0, omega * half * cell / volumes[i]);
    }
    if (mass == 0.0)
    {
        std::fill(profile.values().begin(), profile.values().end(), 0.0);
        return profile;
    }
    double const raw = integrate(profile);
    if (!(raw > 0.0))
    {
        throw ConfigError("initial profile has no support on the grid");
    }
    double const scale = mass / raw;
    for (auto& value : profile.values())
    {
        value *= scale;
    }
    return profile;
}
}  // namespace

RadialProfile sample_initial(InitialData const& data, GridHandle const& handle)
{
    RadialGrid const& grid = *handle;
    double const R = grid.radius();

    if (auto const* constant = std::get_if<initial::Constant>(&data))
    {
        if (!(constant->level >= 0.0) || !std::isfinite(constant->level))
        {
            throw ConfigError(fmt::format(
                "constant initial level must be nonnegative, got {}",
                constant->level));
        }
        return RadialProfile(
            handle, std::vector<double>(grid.size(), constant->level));
    }
    if (auto const* bump = std::get_if<initial::GaussianBump>(&data))
    {
        if (!(bump->width > 0.0))
        {
            throw ConfigError("gaussian width must be positive");
        }
        if (!(bump->center >= 0.0 && bump->center < R))
        {
            throw ConfigError("gaussian center must lie in [0, R)");
        }
        auto shape = [b = *bump](double r) {
            double const z = (r - b.center) / b.width;
            return std::exp(-z * z);
        };
        return sample_shape(shape, bump->mass, grid, handle);
    }
    auto const& ring = std::get<initial::Annulus>(data);
    if (!(ring.r_lo >= 0.0 && ring.r_lo < ring.r_hi && ring.r_hi <= R))
    {
        throw ConfigError("annulus requires 0 <= r_lo < r_hi <= R");
    }
    auto shape = [a = ring](double r) {
        if (r <= a.r_lo || r >= a.r_hi)
        {
            return 0.0;
        }
        double const s = std::sin(std::numbers::pi * (r - a.r_lo)
                                  / (a.r_hi - a.r_lo));
        return s * s;
    };
    return sample_shape(shape, ring.mass, grid, handle);
}

void RunConfig::validate() const
{
    if (geometry.n < 1)
    {
        throw ConfigError(fmt::format("n must be >= 1, got {}", geometry.n));
    }
    if (!(geometry.R > 0.0) || !std::isfinite(geometry.R))
    {
        throw ConfigError(fmt::format("R must be positive, got {}", geometry.R));
    }
    make_diffusion_law(diffusion.alpha, diffusion.kappa);
    if (!(boundary.M > 0.0) || !std::isfinite(boundary.M))
    {
        throw ConfigError(fmt::format("M must be positive, got {}", boundary.M));
    }
    if (cells < 16)
    {
        throw ConfigError(fmt::format("cells must be >= 16, got {}", cells));
    }
    if (!(t_end >= 0.0) || !std::isfinite(t_end))
    {
        throw ConfigError(fmt::format("t_end must be >= 0, got {}", t_end));
    }
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
    {
        throw ConfigError(
            fmt::format("cfl_safety must lie in (0, 1], got {}", cfl_safety));
    }
    if (u_max_threshold && !(*u_max_threshold > 0.0))
    {
        throw ConfigError("u_max_threshold must be positive");
    }
    if (dt_min && !(*dt_min > 0.0))
    {
        throw ConfigError("dt_min must be positive");
    }
    if (output_stride < 1)
    {
        throw ConfigError("output_stride must be >= 1");
    }
    for (double p : lp_exponents)
    {
        if (!(p > 1.0) || !std::isfinite(p))
        {
            throw ConfigError(
                fmt::format("lp exponents must be finite and > 1, got {}", p));
        }
    }
    double const R = geometry.R;
    std::visit(
        [R](auto const& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, initial::Constant>)
            {
                if (!(d.level >= 0.0))
                    throw ConfigError("initial mass must be nonnegative");
            }
            else if constexpr (std::is_same_v<T, initial::GaussianBump>)
            {
                if (!(d.mass >= 0.0))
                    throw ConfigError("initial mass must be nonnegative");
                if (!(d.width > 0.0))
                    throw ConfigError("initial.width must be positive");
                if (!(d.center >= 0.0 && d.center < R))
                    throw ConfigError("initial.center must lie in [0, R)");
            }
            else
            {
                if (!(d.mass >= 0.0))
                    throw ConfigError("initial mass must be nonnegative");
                if (!(d.r_lo >= 0.0 && d.r_lo < d.r_hi && d.r_hi <= R))
                    throw ConfigError(
                        "annulus requires 0 <= r_lo < r_hi <= R");
            }
        },
        initial);
}

double resolve_threshold(RunConfig const& config, double initial_linf)
{
    if (config.u_max_threshold)
    {
        return *config.u_max_threshold;
    }
    return 1e6 * std::max(initial_linf, 1.0);
}

double resolve_dt_min(RunConfig const& config, double initial_dt)
{
    if (config.dt_min)
    {
        return *config.dt_min;
    }
    return 1e-12 * initial_dt;
}

}  // namespace radchem
