#pragma once

#include <iosfwd>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "radchem/model.hpp"

namespace radchem
{

/// Thrown when profiles from different grids are combined.
class GridMismatch : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

//---------------------------------------------------------------------------//
/*!
 * Uniform cell-centered finite-volume mesh of the ball B_R in R^n, reduced
 * to the radial coordinate.
 *
 * Cell i (0-based) spans [faces[i], faces[i+1]]. Volumes are the exact
 * shell volumes (omega/n)(r_out^n - r_in^n) and face areas are
 * omega r^(n-1), so the face at the origin has zero area for n >= 2. For
 * n = 1 the origin face has area 2 but carries zero flux by symmetry.
 */
class RadialGrid
{
  public:
    RadialGrid(Geometry geometry, int cells);

    static std::shared_ptr<RadialGrid const> make(Geometry geometry, int cells)
    {
        return std::make_shared<RadialGrid const>(geometry, cells);
    }

    Geometry const& geometry() const { return geometry_; }
    int dimension() const { return geometry_.n; }
    double radius() const { return geometry_.R; }
    std::size_t size() const { return centers_.size(); }
    double dr() const { return dr_; }

    std::span<double const> faces() const { return faces_; }
    std::span<double const> centers() const { return centers_; }
    std::span<double const> volumes() const { return volumes_; }
    std::span<double const> areas() const { return areas_; }

    double total_volume() const;

    /// Same dimension, radius and cell count.
    bool matches(RadialGrid const& other) const;

  private:
    Geometry geometry_;
    double dr_;
    std::vector<double> faces_;
    std::vector<double> centers_;
    std::vector<double> volumes_;
    std::vector<double> areas_;
};

using GridHandle = std::shared_ptr<RadialGrid const>;

/// Cell-centered radial field (u or v).
class RadialProfile
{
  public:
    RadialProfile() = default;
    explicit RadialProfile(GridHandle grid);
    RadialProfile(GridHandle grid, std::vector<double> values);

    RadialGrid const& grid() const { return *grid_; }
    GridHandle const& grid_handle() const { return grid_; }

    std::size_t size() const { return values_.size(); }
    std::span<double const> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    bool all_finite() const;
    double min() const;
    double max_abs() const;

    void require_same_grid(RadialProfile const& other) const;

  private:
    GridHandle grid_;
    std::vector<double> values_;
};

/// Finite-volume quadrature sum_i V_i f_i (compensated summation).
double integrate(RadialProfile const& profile);

struct LpResult
{
    double integral;  // int |f|^p (equals the norm for p = inf)
    double norm;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Throws std::domain_error for p < 1.
LpResult lp_norm(RadialProfile const& profile, double p);

/// Second-order extrapolation of the profile to r = R.
double boundary_trace(RadialProfile const& profile);

/// Snapshot CSV with header `r,value` (plus optional extra column names).
void write_profile_csv(std::ostream& os, RadialProfile const& profile);
void write_profile_csv(std::ostream& os,
                       RadialProfile const& profile,
                       RadialProfile const& extra,
                       char const* extra_name);

}  // namespace radchem
