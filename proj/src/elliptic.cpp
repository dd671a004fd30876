#include "radchem/elliptic.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace radchem
{

std::vector<double> solve_tridiagonal(std::span<double const> lower,
                                      std::span<double const> diag,
                                      std::span<double const> upper,
                                      std::span<double const> rhs)
{
    std::size_t const N = diag.size();
    if (lower.size() != N || upper.size() != N || rhs.size() != N || N == 0)
    {
        throw std::invalid_argument("tridiagonal bands must have equal size");
    }
    constexpr double kMinPivot = 1e-300;

    std::vector<double> c_prime(N);
    std::vector<double> x(N);
    double pivot = diag[0];
    if (std::abs(pivot) < kMinPivot)
    {
        throw SingularSystem("vanishing pivot in row 0");
    }
    c_prime[0] = upper[0] / pivot;
    x[0] = rhs[0] / pivot;

    // Forward sweep
    for (std::size_t i = 1; i < N; ++i)
    {
        pivot = diag[i] - lower[i] * c_prime[i - 1];
        if (std::abs(pivot) < kMinPivot)
        {
            throw SingularSystem(fmt::format("vanishing pivot in row {}", i));
        }
        c_prime[i] = upper[i] / pivot;
        x[i] = (rhs[i] - lower[i] * x[i - 1]) / pivot;
    }

    // Back substitution
    for (std::size_t i = N - 1; i > 0; --i)
    {
        x[i - 1] -= c_prime[i - 1] * x[i];
    }
    return x;
}

EllipticSolution solve_v(RadialProfile const& u, BoundaryDatum boundary)
{
    RadialGrid const& grid = u.grid();
    std::size_t const N = grid.size();
    for (std::size_t i = 0; i < N; ++i)
    {
        if (!std::isfinite(u[i]) || u[i] < 0.0)
        {
            throw std::invalid_argument(fmt::format(
                "elliptic solve needs finite u >= 0, got u[{}] = {}", i, u[i]));
        }
    }
    double const M = boundary.M;
    double const dr = grid.dr();
    auto areas = grid.areas();
    auto volumes = grid.volumes();

    // Solve for the deficit w = M - v, which satisfies the same operator with
    // homogeneous boundary data and source V_i u_i M. Rows are assembled
    // with the sign flipped so the diagonal is positive.
    std::vector<double> lower(N, 0.0);
    std::vector<double> diag(N, 0.0);
    std::vector<double> upper(N, 0.0);
    std::vector<double> rhs(N, 0.0);
    for (std::size_t i = 0; i < N; ++i)
    {
        double const inner = i == 0 ? 0.0 : areas[i] / dr;
        double const outer = areas[i + 1] / dr;
        lower[i] = -inner;
        diag[i] = inner + volumes[i] * u[i];
        rhs[i] = volumes[i] * u[i] * M;
        if (i + 1 < N)
        {
            upper[i] = -outer;
            diag[i] += outer;
        }
        else
        {
            // ghost 2M - v_N: outer flux is 2 A (M - v_N) / dr = -2 A w_N / dr
            diag[i] += 2.0 * outer;
        }
    }

    std::vector<double> deficit = solve_tridiagonal(lower, diag, upper, rhs);

    // Residual of the v-system: rows scaled by their diagonal.
    double residual = 0.0;
    for (std::size_t i = 0; i < N; ++i)
    {
        double r = diag[i] * deficit[i] - rhs[i];
        if (i > 0)
            r += lower[i] * deficit[i - 1];
        if (i + 1 < N)
            r += upper[i] * deficit[i + 1];
        residual = std::max(residual, std::abs(r / diag[i]));
    }

    EllipticSolution solution;
    solution.residual = residual;
    for (double& w : deficit)
    {
        w = M - w;
    }
    solution.v = RadialProfile(u.grid_handle(), std::move(deficit));
    auto const& v = solution.v;

    solution.vr_faces.assign(N + 1, 0.0);
    for (std::size_t i = 1; i < N; ++i)
    {
        solution.vr_faces[i] = (v[i] - v[i - 1]) / dr;
    }
    solution.vr_faces[N] = 2.0 * (M - v[N - 1]) / dr;
    solution.boundary_flux = solution.vr_faces[N];
    return solution;
}

std::vector<double> vr_from_integral(RadialProfile const& u,
                                     RadialProfile const& v)
{
    u.require_same_grid(v);
    RadialGrid const& grid = u.grid();
    std::size_t const N = grid.size();
    int const n = grid.dimension();
    double const dr = grid.dr();
    auto centers = grid.centers();
    auto faces = grid.faces();

    std::vector<double> result(N + 1, 0.0);
    double cumulative = 0.0;
    for (std::size_t i = 0; i < N; ++i)
    {
        cumulative += std::pow(centers[i], n - 1) * u[i] * v[i] * dr;
        result[i + 1] = cumulative / std::pow(faces[i + 1], n - 1);
    }
    return result;
}

double boundary_flux_bound(double u0_mass, Geometry const& geometry)
{
    if (!(u0_mass >= 0.0))
    {
        throw std::domain_error(
            fmt::format("flux bound needs nonnegative mass, got {}", u0_mass));
    }
    return std::pow(geometry.R, 1 - geometry.n) * u0_mass
           / surface_coefficient(geometry.n);
}

}  // namespace radchem
