#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "radchem/grid.hpp"
#include "radchem/model.hpp"

namespace radchem
{

/// Raised when the tridiagonal elimination meets a vanishing pivot. For
/// u >= 0 the system is an M-matrix, so this indicates corrupted input.
class SingularSystem : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Thomas elimination for lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1]
/// = rhs[i]; lower[0] and upper[N-1] are ignored.
std::vector<double> solve_tridiagonal(std::span<double const> lower,
                                      std::span<double const> diag,
                                      std::span<double const> upper,
                                      std::span<double const> rhs);

struct EllipticSolution
{
    RadialProfile v;
    // dv/dr at the N+1 faces: zero at the origin, Dirichlet ghost closure at R.
    std::vector<double> vr_faces;
    // dv/dnu at r = R (the last entry of vr_faces).
    double boundary_flux = 0.0;
    // Max-norm residual of the assembled system, each row scaled by its
    // diagonal.
    double residual = 0.0;
};

/*!
 * Solve 0 = Lap v - u v with v(R) = M on the radial grid.
 *
 * Cell balance: A_{i+1/2}(v_{i+1}-v_i)/dr - A_{i-1/2}(v_i-v_{i-1})/dr
 * = V_i u_i v_i, with zero flux through the origin face and the ghost
 * value 2M - v_N outside r = R. Throws std::invalid_argument for
 * non-finite or negative u.
 */
EllipticSolution solve_v(RadialProfile const& u, BoundaryDatum boundary);

/// r^(1-n) * int_0^r rho^(n-1) u v drho at every face, by cumulative
/// midpoint quadrature. The origin face is 0.
std::vector<double> vr_from_integral(RadialProfile const& u,
                                     RadialProfile const& v);

/// c1 = R^(1-n) * mass / (n |B_1|). The boundary flux obeys
/// dv/dnu <= M c1 for any u >= 0 with the given mass.
double boundary_flux_bound(double u0_mass, Geometry const& geometry);

}  // namespace radchem
