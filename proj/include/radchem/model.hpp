#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace radchem
{

class RadialGrid;
class RadialProfile;

/// Thrown for invalid run configurations (bad values, unknown keys, ...).
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Power-law diffusivity D(xi) = kappa * (xi + 1)^(-alpha).
struct DiffusionLaw
{
    double alpha = 0.0;
    double kappa = 1.0;

    /// Throws std::domain_error for xi < 0 (a negative density means the
    /// scheme lost positivity).
    double eval(double xi) const;
    double derivative(double xi) const;
};

DiffusionLaw make_diffusion_law(double alpha, double kappa);

struct Geometry
{
    int n = 1;
    double R = 1.0;
};

/// |B_1(0)| in R^n, i.e. pi^(n/2) / Gamma(n/2 + 1).
double unit_ball_volume(int n);

/// Surface coefficient omega = n |B_1(0)|, so that |dB_r| = omega r^(n-1).
double surface_coefficient(int n);

double ball_volume(const Geometry& geometry);

struct BoundaryDatum
{
    double M = 1.0;
};

namespace initial
{
struct Constant
{
    double level = 0.0;
};

/// exp(-((r - center)/width)^2), rescaled to carry `mass`.
struct GaussianBump
{
    double mass = 0.0;
    double width = 0.1;
    double center = 0.0;
};

/// sin^2 bump supported on [r_lo, r_hi], rescaled to carry `mass`.
struct Annulus
{
    double mass = 0.0;
    double r_lo = 0.0;
    double r_hi = 1.0;
};
}  // namespace initial

using InitialData
    = std::variant<initial::Constant, initial::GaussianBump, initial::Annulus>;

std::string initial_kind_name(InitialData const& data);

/// Cell averages of the initial datum: each cell integral is computed by
/// 3-point Gauss quadrature against r^(n-1), and the profile is then
/// normalized to the requested mass.
RadialProfile sample_initial(InitialData const& data,
                             std::shared_ptr<RadialGrid const> const& grid);

struct RunConfig
{
    Geometry geometry;
    DiffusionLaw diffusion;
    BoundaryDatum boundary;
    InitialData initial = initial::Constant{};
    int cells = 256;
    double t_end = 1.0;
    double cfl_safety = 0.2;
    // Resolved at run start when absent (see resolve_threshold / resolve_dt_min).
    std::optional<double> u_max_threshold;
    std::optional<double> dt_min;
    int output_stride = 1;
    std::vector<double> lp_exponents{2.0};

    /// Throws ConfigError naming the first violated bound.
    void validate() const;
};

double resolve_threshold(RunConfig const& config, double initial_linf);
double resolve_dt_min(RunConfig const& config, double initial_dt);

}  // namespace radchem
