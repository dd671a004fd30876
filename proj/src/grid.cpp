#include "radchem/grid.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace radchem
{

RadialGrid::RadialGrid(Geometry geometry, int cells) : geometry_(geometry)
{
    if (geometry.n < 1 || !(geometry.R > 0.0))
    {
        throw ConfigError("grid requires n >= 1 and R > 0");
    }
    if (cells < 2)
    {
        throw ConfigError("grid requires at least two cells");
    }
    auto const N = static_cast<std::size_t>(cells);
    dr_ = geometry.R / cells;
    int const n = geometry.n;
    double const omega = surface_coefficient(n);

    faces_.resize(N + 1);
    areas_.resize(N + 1);
    for (std::size_t i = 0; i <= N; ++i)
    {
        faces_[i] = i == N ? geometry.R : static_cast<double>(i) * dr_;
        areas_[i] = omega * std::pow(faces_[i], n - 1);
    }
    centers_.resize(N);
    volumes_.resize(N);
    for (std::size_t i = 0; i < N; ++i)
    {
        centers_[i] = (static_cast<double>(i) + 0.5) * dr_;
        volumes_[i] = omega / n
                      * (std::pow(faces_[i + 1], n) - std::pow(faces_[i], n));
    }
}

double RadialGrid::total_volume() const
{
    double sum = 0.0;
    for (double v : volumes_)
    {
        sum += v;
    }
    return sum;
}

bool RadialGrid::matches(RadialGrid const& other) const
{
    return geometry_.n == other.geometry_.n && geometry_.R == other.geometry_.R
           && size() == other.size();
}

//---------------------------------------------------------------------------//

RadialProfile::RadialProfile(GridHandle grid)
    : grid_(std::move(grid)), values_(grid_->size(), 0.0)
{
}

RadialProfile::RadialProfile(GridHandle grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values))
{
    if (values_.size() != grid_->size())
    {
        throw GridMismatch(fmt::format("profile has {} values for {} cells",
                                       values_.size(), grid_->size()));
    }
}

bool RadialProfile::all_finite() const
{
    return std::all_of(values_.begin(), values_.end(),
                       [](double x) { return std::isfinite(x); });
}

double RadialProfile::min() const
{
    return *std::min_element(values_.begin(), values_.end());
}

double RadialProfile::max_abs() const
{
    double result = 0.0;
    for (double x : values_)
    {
        result = std::max(result, std::abs(x));
    }
    return result;
}

void RadialProfile::require_same_grid(RadialProfile const& other) const
{
    if (!grid_ || !other.grid_ || !grid_->matches(*other.grid_))
    {
        throw GridMismatch("profiles live on different grids");
    }
}

//---------------------------------------------------------------------------//

namespace
{
// Neumaier summation of sum_i V_i g(f_i).
template<class F>
double weighted_sum(RadialProfile const& profile, F&& g)
{
    auto volumes = profile.grid().volumes();
    auto values = profile.values();
    double sum = 0.0;
    double carry = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        double const term = volumes[i] * g(values[i]);
        double const t = sum + term;
        if (std::abs(sum) >= std::abs(term))
            carry += (sum - t) + term;
        else
            carry += (term - t) + sum;
        sum = t;
    }
    return sum + carry;
}
}  // namespace

double integrate(RadialProfile const& profile)
{
    return weighted_sum(profile, [](double x) { return x; });
}

LpResult lp_norm(RadialProfile const& profile, double p)
{
    if (std::isinf(p) && p > 0)
    {
        double const m = profile.max_abs();
        return {m, m};
    }
    if (!(p >= 1.0))
    {
        throw std::domain_error(fmt::format("Lp norm requires p >= 1, got {}", p));
    }
    double const raw = weighted_sum(
        profile, [p](double x) { return std::pow(std::abs(x), p); });
    return {raw, std::pow(raw, 1.0 / p)};
}

double boundary_trace(RadialProfile const& profile)
{
    auto values = profile.values();
    std::size_t const N = values.size();
    if (N < 2)
    {
        throw GridMismatch("boundary trace needs at least two cells");
    }
    return 0.5 * (3.0 * values[N - 1] - values[N - 2]);
}

void write_profile_csv(std::ostream& os, RadialProfile const& profile)
{
    auto centers = profile.grid().centers();
    os << "r,value\n";
    for (std::size_t i = 0; i < profile.size(); ++i)
    {
        fmt::print(os, "{},{}\n", centers[i], profile[i]);
    }
}

void write_profile_csv(std::ostream& os,
                       RadialProfile const& profile,
                       RadialProfile const& extra,
                       char const* extra_name)
{
    profile.require_same_grid(extra);
    auto centers = profile.grid().centers();
    os << "r,value," << extra_name << '\n';
    for (std::size_t i = 0; i < profile.size(); ++i)
    {
        fmt::print(os, "{},{},{}\n", centers[i], profile[i],
                   extra[i]);
    }
}

}  // namespace radchem
