#include "radchem/stepper.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace radchem
{

std::string_view to_string(StepStatus status)
{
    switch (status)
    {
        case StepStatus::advanced:
            return "advanced";
        case StepStatus::dt_underflow:
            return "dt_underflow";
        case StepStatus::threshold_exceeded:
            return "threshold_exceeded";
        case StepStatus::numerical_failure:
            return "numerical_failure";
    }
    return "unknown";
}

SimState make_initial_state(RunConfig const& config)
{
    config.validate();
    auto grid = RadialGrid::make(config.geometry, config.cells);
    SimState state;
    state.u = sample_initial(config.initial, grid);
    state.elliptic = solve_v(state.u, config.boundary);
    state.initial_mass = integrate(state.u);
    state.dt = cfl_dt(state.u, state.elliptic.vr_faces, config.diffusion,
                      config.cfl_safety);
    state.limits.u_max_threshold
        = resolve_threshold(config, state.u.max_abs());
    state.limits.dt_min = resolve_dt_min(config, state.dt);
    return state;
}

std::vector<double> face_flux(RadialProfile const& u,
                              std::span<double const> vr_faces,
                              DiffusionLaw const& law)
{
    RadialGrid const& grid = u.grid();
    std::size_t const N = grid.size();
    if (vr_faces.size() != N + 1)
    {
        throw GridMismatch("face array does not match the grid");
    }
    auto areas = grid.areas();
    double const dr = grid.dr();

    std::vector<double> flux(N + 1, 0.0);
    for (std::size_t f = 1; f < N; ++f)
    {
        double const left = u[f - 1];
        double const right = u[f];
        double const vr = vr_faces[f];
        if (!std::isfinite(left) || !std::isfinite(right) || !std::isfinite(vr))
        {
            throw NumericalError(
                fmt::format("non-finite input at face {}", f), f);
        }
        double const diffusive = law.eval(0.5 * (left + right))
                                 * (right - left) / dr;
        double const donor = vr >= 0.0 ? left : right;
        flux[f] = areas[f] * (diffusive - donor * vr);
    }
    return flux;
}

double cfl_dt(RadialProfile const& u,
              std::span<double const> vr_faces,
              DiffusionLaw const& law,
              double cfl_safety)
{
    std::size_t const N = u.size();
    double const dr = u.grid().dr();

    // D is monotone in its argument, so only the extreme face mean matters.
    double lo = kInfinity;
    double hi = 0.0;
    for (std::size_t f = 1; f < N; ++f)
    {
        double const ubar = 0.5 * (u[f - 1] + u[f]);
        lo = std::min(lo, ubar);
        hi = std::max(hi, ubar);
    }
    double max_d = N > 1 ? law.eval(law.alpha >= 0.0 ? lo : hi) : law.eval(0.0);
    double max_vr = 0.0;
    for (double vr : vr_faces)
    {
        max_vr = std::max(max_vr, std::abs(vr));
    }

    double dt = dr * dr / (2.0 * max_d);
    if (max_vr > 0.0)
    {
        dt = std::min(dt, dr / max_vr);
    }
    return cfl_safety * dt;
}

namespace
{
struct Update
{
    std::vector<double> values;
    double min_value;
    std::size_t argmin;
};

Update apply_fluxes(RadialProfile const& u,
                    std::span<double const> flux,
                    double dt,
                    StepperOptions const& options)
{
    auto volumes = u.grid().volumes();
    std::size_t const N = u.size();
    Update update{std::vector<double>(N), 0.0, 0};
    update.min_value = kInfinity;
    for (std::size_t i = 0; i < N; ++i)
    {
        double outer = flux[i + 1];
        if (options.flip_outer_flux_cell == i)
        {
            outer = -outer;
        }
        double const value = u[i] + dt / volumes[i] * (outer - flux[i]);
        update.values[i] = value;
        if (value < update.min_value)
        {
            update.min_value = value;
            update.argmin = i;
        }
    }
    return update;
}

// Zero round-off negatives and rescale the positive part so the quadrature
// mass is unchanged.
void clip_negatives(std::vector<double>& values, std::span<double const> volumes)
{
    double gained = 0.0;
    double positive = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        if (values[i] < 0.0)
        {
            gained -= volumes[i] * values[i];
            values[i] = 0.0;
        }
        else
        {
            positive += volumes[i] * values[i];
        }
    }
    if (gained > 0.0 && positive > 0.0)
    {
        double const scale = (positive - gained) / positive;
        for (auto& value : values)
        {
            value *= scale;
        }
    }
}
}  // namespace

StepOutcome step(SimState const& state,
                 RunConfig const& config,
                 StepperOptions const& options)
{
    StepOutcome outcome;
    if (!(state.dt >= state.limits.dt_min))
    {
        outcome.status = StepStatus::dt_underflow;
        outcome.measurement = state.dt;
        return outcome;
    }

    try
    {
        std::vector<double> flux;
        if (options.zero_drift)
        {
            std::vector<double> still(state.elliptic.vr_faces.size(), 0.0);
            flux = face_flux(state.u, still, config.diffusion);
        }
        else
        {
            flux = face_flux(state.u, state.elliptic.vr_faces, config.diffusion);
        }

        double const linf = state.u.max_abs();
        double const floor = -1e-13 * linf;
        double dt = state.dt;
        Update update = apply_fluxes(state.u, flux, dt, options);
        if (update.min_value < floor)
        {
            dt *= 0.5;
            update = apply_fluxes(state.u, flux, dt, options);
            if (update.min_value < floor)
            {
                outcome.status = StepStatus::numerical_failure;
                outcome.measurement = update.min_value;
                outcome.location = update.argmin;
                return outcome;
            }
        }
        for (std::size_t i = 0; i < update.values.size(); ++i)
        {
            if (!std::isfinite(update.values[i]))
            {
                throw NumericalError("non-finite density after update", i);
            }
        }

        SimState next;
        next.t = state.t + dt;
        next.dt = dt;
        next.step_index = state.step_index + 1;
        next.initial_mass = state.initial_mass;
        next.limits = state.limits;
        double const relative_min = linf > 0.0 ? update.min_value / linf : 0.0;
        next.min_u_watermark = std::min(state.min_u_watermark, relative_min);

        clip_negatives(update.values, state.u.grid().volumes());
        next.u = RadialProfile(state.u.grid_handle(), std::move(update.values));
        next.elliptic = solve_v(next.u, config.boundary);

        double const next_linf = next.u.max_abs();
        if (next_linf > state.limits.u_max_threshold)
        {
            outcome.status = StepStatus::threshold_exceeded;
            outcome.measurement = next_linf;
        }
        outcome.state = std::move(next);
        return outcome;
    }
    catch (NumericalError const& e)
    {
        outcome.status = StepStatus::numerical_failure;
        outcome.measurement = std::nan("");
        outcome.location = e.location();
    }
    catch (std::exception const&)
    {
        // Negative density reaching D or the elliptic solver.
        outcome.status = StepStatus::numerical_failure;
        outcome.measurement = std::nan("");
    }
    return outcome;
}

Record make_record(SimState const& state, RunConfig const& config)
{
    Record record;
    record.t = state.t;
    record.dt = state.dt;
    record.step = state.step_index;
    record.mass = integrate(state.u);
    record.linf = state.u.max_abs();
    record.lp.reserve(config.lp_exponents.size());
    for (double p : config.lp_exponents)
    {
        record.lp.push_back(lp_norm(state.u, p).norm);
    }
    record.trace_u = boundary_trace(state.u);
    record.dv_dnu = state.elliptic.boundary_flux;
    record.min_u = state.u.min();
    return record;
}

AdvanceResult advance(SimState state,
                      RunConfig const& config,
                      Recorder const& recorder,
                      StepperOptions const& options)
{
    AdvanceResult result;
    std::size_t last_recorded = state.step_index;
    if (recorder)
    {
        recorder(make_record(state, config), state);
    }

    auto const stride = static_cast<std::size_t>(config.output_stride);
    while (state.t < config.t_end)
    {
        double const planned = cfl_dt(state.u, state.elliptic.vr_faces,
                                      config.diffusion, config.cfl_safety);
        double const remaining = config.t_end - state.t;
        bool const final_step = planned >= remaining;
        state.dt = final_step ? remaining : planned;
        if (final_step && remaining < state.limits.dt_min)
        {
            // Horizon reached up to the step floor.
            state.t = config.t_end;
            break;
        }

        StepOutcome outcome = step(state, config, options);
        if (outcome.state)
        {
            bool const full = outcome.state->dt == state.dt;
            state = std::move(*outcome.state);
            outcome.state.reset();
            if (final_step && full)
            {
                state.t = config.t_end;
            }
            ++result.steps;
        }
        if (outcome.status != StepStatus::advanced)
        {
            result.terminal = std::move(outcome);
            break;
        }
        if (recorder && state.step_index % stride == 0)
        {
            recorder(make_record(state, config), state);
            last_recorded = state.step_index;
        }
    }

    if (recorder && last_recorded != state.step_index)
    {
        recorder(make_record(state, config), state);
    }
    result.final = std::move(state);
    return result;
}

}  // namespace radchem
