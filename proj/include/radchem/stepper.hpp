#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "radchem/elliptic.hpp"
#include "radchem/grid.hpp"
#include "radchem/model.hpp"

namespace radchem
{

/// Non-finite values met while assembling fluxes or updating u.
class NumericalError : public std::runtime_error
{
  public:
    NumericalError(std::string const& what, std::size_t location)
        : std::runtime_error(what), location_(location)
    {
    }
    std::size_t location() const { return location_; }

  private:
    std::size_t location_;
};

/// Blow-up trigger and step floor, resolved once from the initial state.
struct RunLimits
{
    double u_max_threshold;
    double dt_min;
};

struct SimState
{
    double t = 0.0;
    double dt = 0.0;
    std::size_t step_index = 0;
    RadialProfile u;
    EllipticSolution elliptic;  // always solved for the current u
    double initial_mass = 0.0;
    // Smallest pre-clipping value seen, relative to ||u||_inf.
    double min_u_watermark = 0.0;
    RunLimits limits{};
};

/// Sample u0, solve v, and resolve the run limits.
SimState make_initial_state(RunConfig const& config);

enum class StepStatus
{
    advanced,
    dt_underflow,
    threshold_exceeded,
    numerical_failure,
};

std::string_view to_string(StepStatus status);

struct StepOutcome
{
    StepStatus status = StepStatus::advanced;
    // Present on `advanced` and `threshold_exceeded` (the offending state).
    std::optional<SimState> state;
    // dt for underflow, ||u||_inf for threshold, offending value otherwise.
    double measurement = 0.0;
    std::optional<std::size_t> location;
};

/// Test hooks used by the verification harness and unit tests.
struct StepperOptions
{
    // Drops the chemotactic drift (pure diffusion control runs).
    bool zero_drift = false;
    // Fault injection: this cell sees its outer face flux with the wrong
    // sign, breaking the telescoping sum.
    std::optional<std::size_t> flip_outer_flux_cell;
};

/*!
 * Face fluxes Phi_{i+1/2} = A [D(ubar) (u_{i+1}-u_i)/dr - u_up vr], with
 * ubar the arithmetic mean of the two cells and u_up the donor cell
 * against vr. Both boundary faces are exactly zero. Throws NumericalError
 * on non-finite input.
 */
std::vector<double> face_flux(RadialProfile const& u,
                              std::span<double const> vr_faces,
                              DiffusionLaw const& law);

/// safety * min(dr^2 / (2 max D(ubar)), dr / max |vr|).
double cfl_dt(RadialProfile const& u,
              std::span<double const> vr_faces,
              DiffusionLaw const& law,
              double cfl_safety);

/// One forward-Euler step with the step size stored in `state.dt`.
StepOutcome step(SimState const& state,
                 RunConfig const& config,
                 StepperOptions const& options = {});

/// What the recorder receives at each output point.
struct Record
{
    double t = 0.0;
    double dt = 0.0;
    std::size_t step = 0;
    double mass = 0.0;
    double linf = 0.0;
    std::vector<double> lp;  // ||u||_p for config.lp_exponents
    double trace_u = 0.0;
    double dv_dnu = 0.0;
    double min_u = 0.0;
};

Record make_record(SimState const& state, RunConfig const& config);

using Recorder = std::function<void(Record const&, SimState const&)>;

struct AdvanceResult
{
    StepOutcome terminal;  // status plus measurement; state is in `final`
    SimState final;
    std::size_t steps = 0;
};

/// Step until t_end, threshold, underflow or failure. The recorder sees the
/// initial state, every `output_stride`-th step and the terminal state.
AdvanceResult advance(SimState state,
                      RunConfig const& config,
                      Recorder const& recorder,
                      StepperOptions const& options = {});

}  // namespace radchem
