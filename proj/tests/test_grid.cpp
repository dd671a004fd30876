#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "radchem/grid.hpp"

using namespace radchem;

namespace
{
RadialProfile constant(GridHandle const& grid, double c)
{
    return RadialProfile(grid, std::vector<double>(grid->size(), c));
}

template<class F>
RadialProfile from_centers(GridHandle const& grid, F&& f)
{
    RadialProfile p(grid);
    auto centers = grid->centers();
    for (std::size_t i = 0; i < p.size(); ++i)
        p[i] = f(centers[i]);
    return p;
}
}  // namespace

TEST_CASE("cell geometry")
{
    auto grid = RadialGrid::make({3, 2.0}, 16);
    CHECK(grid->dr() == doctest::Approx(0.125));
    CHECK(grid->faces().size() == 17);
    CHECK(grid->faces().back() == 2.0);
    CHECK(grid->centers()[0] == doctest::Approx(0.0625));
    CHECK(grid->areas()[0] == 0.0);
    for (std::size_t i = 0; i < grid->size(); ++i)
    {
        CHECK(grid->faces()[i + 1] > grid->faces()[i]);
        CHECK(grid->volumes()[i] > 0.0);
    }

    auto line = RadialGrid::make({1, 1.0}, 16);
    CHECK(line->areas()[0] == doctest::Approx(2.0));
    CHECK(line->areas()[16] == doctest::Approx(2.0));
}

TEST_CASE("volumes telescope to the ball volume")
{
    for (int n : {1, 2, 3, 5})
    {
        for (int N : {16, 512})
        {
            RadialGrid grid({n, 1.7}, N);
            double const exact = unit_ball_volume(n) * std::pow(1.7, n);
            CHECK(std::abs(grid.total_volume() - exact) <= 1e-13 * exact);
        }
    }
}

TEST_CASE("integrate")
{
    auto disk = RadialGrid::make({2, 1.0}, 64);
    CHECK(std::abs(integrate(constant(disk, 1.0)) - std::numbers::pi)
          <= 1e-12 * std::numbers::pi);
    CHECK(integrate(constant(disk, 0.0)) == 0.0);

    auto ball = RadialGrid::make({3, 2.0}, 100);
    double const expected = 2.5 * 4.0 / 3.0 * std::numbers::pi * 8.0;
    CHECK(std::abs(integrate(constant(ball, 2.5)) - expected) <= 1e-12 * expected);
}

TEST_CASE("integrate is linear")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    auto grid = RadialGrid::make({3, 1.0}, 200);
    for (int trial = 0; trial < 20; ++trial)
    {
        RadialProfile f(grid);
        RadialProfile g(grid);
        for (std::size_t i = 0; i < f.size(); ++i)
        {
            f[i] = dist(rng);
            g[i] = dist(rng);
        }
        double const a = dist(rng);
        double const b = dist(rng);
        RadialProfile combo(grid);
        for (std::size_t i = 0; i < f.size(); ++i)
            combo[i] = a * f[i] + b * g[i];
        double const lhs = integrate(combo);
        double const rhs = a * integrate(f) + b * integrate(g);
        double const scale = std::abs(a) * lp_norm(f, 1).norm
                             + std::abs(b) * lp_norm(g, 1).norm;
        CHECK(std::abs(lhs - rhs) <= 1e-13 * scale);
    }
}

TEST_CASE("lp norms")
{
    auto grid = RadialGrid::make({2, 1.5}, 64);
    double const area = unit_ball_volume(2) * 1.5 * 1.5;

    auto two = constant(grid, 2.0);
    CHECK(lp_norm(two, kInfinity).norm == 2.0);
    for (double p : {1.0, 2.0, 3.5})
    {
        auto result = lp_norm(two, p);
        CHECK(result.integral == doctest::Approx(std::pow(2.0, p) * area));
        CHECK(result.norm == doctest::Approx(2.0 * std::pow(area, 1.0 / p)));
    }
    auto zero = constant(grid, 0.0);
    CHECK(lp_norm(zero, 2.0).norm == 0.0);
    CHECK(lp_norm(zero, kInfinity).norm == 0.0);

    CHECK_THROWS_AS(lp_norm(two, 0.5), std::domain_error);
}

TEST_CASE("L1 norm is the integral of |f|")
{
    auto grid = RadialGrid::make({3, 1.0}, 128);
    auto bump = from_centers(grid, [](double r) { return std::exp(-40 * r * r); });
    CHECK(lp_norm(bump, 1.0).norm == doctest::Approx(integrate(bump)).epsilon(1e-14));

    auto wave = from_centers(grid, [](double r) { return std::cos(9 * r); });
    auto absolute = from_centers(grid, [](double r) { return std::abs(std::cos(9 * r)); });
    CHECK(lp_norm(wave, 1.0).norm == doctest::Approx(integrate(absolute)).epsilon(1e-14));
}

TEST_CASE("boundary trace")
{
    auto grid = RadialGrid::make({2, 1.0}, 32);
    CHECK(boundary_trace(constant(grid, 3.25)) == doctest::Approx(3.25));
    CHECK(boundary_trace(from_centers(grid, [](double r) { return r; }))
          == doctest::Approx(1.0).epsilon(1e-14));

    // For f = r^2 the extrapolation error is exactly 3 dr^2 / 4.
    double errors[2];
    int const cells[2] = {64, 128};
    for (int k = 0; k < 2; ++k)
    {
        auto g = RadialGrid::make({2, 1.0}, cells[k]);
        auto sq = from_centers(g, [](double r) { return r * r; });
        errors[k] = std::abs(boundary_trace(sq) - 1.0);
        CHECK(errors[k] == doctest::Approx(0.75 * g->dr() * g->dr()).epsilon(1e-9));
    }
    CHECK(errors[0] / errors[1] == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("mismatched grids are rejected")
{
    auto a = RadialGrid::make({2, 1.0}, 32);
    auto b = RadialGrid::make({2, 1.0}, 64);
    auto same = RadialGrid::make({2, 1.0}, 32);
    CHECK_THROWS_AS(constant(a, 1.0).require_same_grid(constant(b, 1.0)),
                    GridMismatch);
    CHECK_NOTHROW(constant(a, 1.0).require_same_grid(constant(same, 1.0)));
    CHECK_THROWS_AS(RadialProfile(a, std::vector<double>(31, 0.0)), GridMismatch);
}

TEST_CASE("profile CSV snapshot")
{
    auto grid = RadialGrid::make({1, 1.0}, 16);
    auto f = from_centers(grid, [](double r) { return 1.0 / 3.0 + r; });
    std::ostringstream os;
    write_profile_csv(os, f);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "r,value");
    std::getline(in, line);
    CHECK(line == "0.03125,0.3645833333333333");

    std::ostringstream both;
    write_profile_csv(both, f, constant(grid, 1.0), "v");
    CHECK(both.str().rfind("r,value,v\n0.03125,0.3645833333333333,1\n", 0) == 0);
}
