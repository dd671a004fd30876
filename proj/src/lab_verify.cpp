#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "radchem/lab.hpp"

namespace radchem
{

double observed_order(std::vector<int> const& cells,
                      std::vector<double> const& errors)
{
    // Least-squares slope of log(error) against log(dr) ~ -log(N).
    std::size_t const k = std::min(cells.size(), errors.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < k; ++i)
    {
        double const x = -std::log(static_cast<double>(cells[i]));
        double const y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double const denom = k * sxx - sx * sx;
    return (k * sxy - sx * sy) / denom;
}

namespace
{
template<class Exact>
Convergence elliptic_ladder(Geometry geometry,
                            double level,
                            double M,
                            std::vector<int> const& cells,
                            Exact&& exact)
{
    Convergence result;
    for (int N : cells)
    {
        auto grid = RadialGrid::make(geometry, N);
        RadialProfile u(grid, std::vector<double>(grid->size(), level));
        auto solution = solve_v(u, BoundaryDatum{M});
        double error = 0.0;
        auto centers = grid->centers();
        for (std::size_t i = 0; i < grid->size(); ++i)
        {
            error = std::max(error,
                             std::abs(solution.v[i] - exact(centers[i])));
        }
        result.cells.push_back(N);
        result.errors.push_back(error);
    }
    result.order = observed_order(result.cells, result.errors);
    return result;
}
}  // namespace

Convergence elliptic_oracle_1d(std::vector<int> const& cells)
{
    return elliptic_ladder(Geometry{1, 1.0}, 1.0, 1.0, cells, [](double r) {
        return std::cosh(r) / std::cosh(1.0);
    });
}

Convergence elliptic_oracle_3d(std::vector<int> const& cells, double R, double M)
{
    return elliptic_ladder(Geometry{3, R}, 4.0, M, cells, [R, M](double r) {
        return M * (R / r) * std::sinh(2.0 * r) / std::sinh(2.0 * R);
    });
}

Convergence vr_representation(RunConfig const& config,
                              std::vector<int> const& cells)
{
    Convergence result;
    for (int N : cells)
    {
        auto grid = RadialGrid::make(config.geometry, N);
        RadialProfile u = sample_initial(config.initial, grid);
        auto solution = solve_v(u, config.boundary);
        auto integral = vr_from_integral(u, solution.v);
        auto areas = grid->areas();
        double sum = 0.0;
        for (std::size_t f = 1; f < integral.size(); ++f)
        {
            double const d = solution.vr_faces[f] - integral[f];
            sum += areas[f] * grid->dr() * d * d;
        }
        result.cells.push_back(N);
        result.errors.push_back(std::sqrt(sum));
    }
    result.order = observed_order(result.cells, result.errors);
    return result;
}

Separation paired_separation(RunConfig const& config,
                             double eps,
                             std::size_t steps)
{
    SimState first = make_initial_state(config);
    SimState second = first;
    double const R = config.geometry.R;
    auto centers = second.u.grid().centers();
    for (std::size_t i = 0; i < second.u.size(); ++i)
    {
        second.u[i] += eps * (1.0 + std::cos(std::numbers::pi * centers[i] / R));
    }
    second.elliptic = solve_v(second.u, config.boundary);
    second.initial_mass = integrate(second.u);

    auto distance = [](SimState const& a, SimState const& b) {
        RadialProfile diff = a.u;
        for (std::size_t i = 0; i < diff.size(); ++i)
        {
            double const d = a.u[i] - b.u[i];
            diff[i] = d * d;
        }
        return integrate(diff);
    };

    Separation out;
    out.t.push_back(first.t);
    out.w.push_back(distance(first, second));
    for (std::size_t k = 0; k < steps && first.t < config.t_end; ++k)
    {
        double const dt = std::min(
            cfl_dt(first.u, first.elliptic.vr_faces, config.diffusion,
                   config.cfl_safety),
            cfl_dt(second.u, second.elliptic.vr_faces, config.diffusion,
                   config.cfl_safety));
        first.dt = dt;
        second.dt = dt;
        StepOutcome a = step(first, config);
        StepOutcome b = step(second, config);
        if (a.status != StepStatus::advanced || b.status != StepStatus::advanced
            || a.state->dt != b.state->dt)
        {
            break;
        }
        first = std::move(*a.state);
        second = std::move(*b.state);
        out.t.push_back(first.t);
        out.w.push_back(distance(first, second));
    }
    return out;
}

GrowthFit fit_log_growth(Separation const& separation)
{
    GrowthFit fit;
    std::size_t const k = separation.t.size();
    if (k < 4 || !(separation.w.front() > 0.0))
    {
        return fit;
    }
    double const t0 = separation.t.front();
    double const log_w0 = std::log(separation.w.front());
    std::vector<double> t(k);
    std::vector<double> y(k);
    for (std::size_t i = 0; i < k; ++i)
    {
        t[i] = separation.t[i] - t0;
        y[i] = std::log(separation.w[i]) - log_w0;
    }

    double st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < k; ++i)
    {
        st += t[i];
        sy += y[i];
        stt += t[i] * t[i];
        sty += t[i] * y[i];
    }
    fit.slope = (k * sty - st * sy) / (k * stt - st * st);

    double const half = 0.5 * t.back();
    double envelope = 0.0;
    for (std::size_t i = 1; i < k && t[i] <= half; ++i)
    {
        envelope = std::max(envelope, y[i] / t[i]);
    }
    fit.envelope = envelope;
    double excess = -kInfinity;
    for (std::size_t i = 0; i < k; ++i)
    {
        if (t[i] > half)
            excess = std::max(excess, y[i] - envelope * t[i]);
    }
    fit.excess = excess;
    fit.finite = std::isfinite(fit.slope) && std::isfinite(fit.envelope)
                 && std::isfinite(fit.excess);
    return fit;
}

namespace
{
struct Trajectory
{
    std::vector<Record> records;
    std::vector<SimState> states;
};

// Records every step; stops at `steps`, t_end or the first non-advanced step.
Trajectory short_run(RunConfig const& config,
                     std::size_t steps,
                     StepperOptions const& options)
{
    RunConfig bounded = config;
    bounded.output_stride = 1;
    Trajectory out;
    SimState state = make_initial_state(bounded);
    out.records.push_back(make_record(state, bounded));
    out.states.push_back(state);
    for (std::size_t k = 0; k < steps && state.t < bounded.t_end; ++k)
    {
        state.dt = std::min(cfl_dt(state.u, state.elliptic.vr_faces,
                                   bounded.diffusion, bounded.cfl_safety),
                            bounded.t_end - state.t);
        StepOutcome outcome = step(state, bounded, options);
        if (!outcome.state)
            break;
        state = std::move(*outcome.state);
        out.records.push_back(make_record(state, bounded));
        out.states.push_back(state);
        if (outcome.status != StepStatus::advanced)
            break;
    }
    return out;
}

void add_max(Ledger& ledger, std::string name, double measured, double tol)
{
    ledger.checks.push_back({std::move(name), measured <= tol, measured, tol});
}

void add_min(Ledger& ledger, std::string name, double measured, double tol)
{
    ledger.checks.push_back({std::move(name), measured >= tol, measured, tol});
}
}  // namespace

Ledger verify_suite(RunConfig const& config, VerifyOptions const& options)
{
    config.validate();
    Ledger ledger;
    std::vector<int> const ladder{64, 128, 256, 512};

    auto const oracle1 = elliptic_oracle_1d(ladder);
    add_max(ledger, "elliptic_oracle_1d_error", oracle1.errors[2], 1e-4);
    add_min(ledger, "elliptic_oracle_1d_order", oracle1.order, 1.9);
    auto const oracle3 = elliptic_oracle_3d(ladder);
    add_min(ledger, "elliptic_oracle_3d_order", oracle3.order, 1.9);

    Trajectory run = short_run(config, options.steps, options.stepper);
    double const M = config.boundary.M;
    double const mass0 = run.records.front().mass;

    double residual = 0, below = 0, above = 0, decrease = 0, vr_negative = 0;
    double origin_vr = 0, boundary_flux = 0;
    for (auto const& state : run.states)
    {
        auto const& sol = state.elliptic;
        residual = std::max(residual, sol.residual / M);
        for (std::size_t i = 0; i < sol.v.size(); ++i)
        {
            below = std::max(below, -sol.v[i] / M);
            above = std::max(above, (sol.v[i] - M) / M);
            if (i > 0)
                decrease = std::max(decrease, (sol.v[i - 1] - sol.v[i]) / M);
        }
        double const scale = M / config.geometry.R;
        for (double vr : sol.vr_faces)
            vr_negative = std::max(vr_negative, -vr / scale);
        origin_vr = std::max(origin_vr, std::abs(sol.vr_faces.front()));
        auto flux = face_flux(state.u, sol.vr_faces, config.diffusion);
        boundary_flux = std::max(
            {boundary_flux, std::abs(flux.front()), std::abs(flux.back())});
    }
    add_max(ledger, "elliptic_residual", residual, 1e-12);
    add_max(ledger, "v_lower_bound", below, kVBoundTolerance);
    add_max(ledger, "v_upper_bound", above, kVBoundTolerance);
    add_max(ledger, "v_monotone", decrease, kVBoundTolerance);
    add_max(ledger, "vr_nonnegative", vr_negative, 1e-12);
    add_max(ledger, "vr_origin_zero", origin_vr, 0.0);
    add_max(ledger, "boundary_faces_zero_flux", boundary_flux, 0.0);

    {
        int const N = config.cells;
        auto rep = vr_representation(config, {N, 2 * N, 4 * N});
        double const scale
            = M * std::max(1.0, boundary_flux_bound(mass0, config.geometry));
        bool const exact = *std::max_element(rep.errors.begin(),
                                             rep.errors.end())
                           <= 1e-11 * scale;
        double const measured = exact ? kInfinity : rep.order;
        add_min(ledger, "vr_representation_order", measured, 1.5);
    }

    double const cap = M * boundary_flux_bound(mass0, config.geometry);
    double flux_excess = -kInfinity;
    double drift = 0.0;
    double negative = 0.0;
    for (auto const& record : run.records)
    {
        flux_excess = std::max(flux_excess, record.dv_dnu - cap);
        drift = std::max(drift, mass0 > 0.0
                                    ? std::abs(record.mass - mass0) / mass0
                                    : std::abs(record.mass));
        negative = std::max(negative, -record.min_u);
    }
    add_max(ledger, "flux_bound", flux_excess, kFluxSlack * std::max(1.0, cap));
    add_max(ledger, "mass_conservation", drift, kMassTolerance);
    add_max(ledger, "positivity", negative, 0.0);
    add_max(ledger, "positivity_preclip",
            -run.states.back().min_u_watermark, 1e-13);

    {
        RunConfig zero = config;
        zero.initial = initial::Constant{0.0};
        zero.t_end = 1e300;
        Trajectory still = short_run(zero, 100, {});
        double deviation = 0.0;
        for (auto const& state : still.states)
        {
            deviation = std::max(deviation, state.u.max_abs());
            for (double v : state.elliptic.v.values())
                deviation = std::max(deviation, std::abs(v - M) / M);
        }
        add_max(ledger, "zero_fixed_point", deviation, 1e-12);
    }

    {
        Trajectory again = short_run(config, options.steps, options.stepper);
        std::ostringstream a;
        std::ostringstream b;
        write_series_csv(a, config, run.records);
        write_series_csv(b, config, again.records);
        add_max(ledger, "determinism", a.str() == b.str() ? 0.0 : 1.0, 0.0);
    }

    {
        auto separation = paired_separation(config, 1e-6, options.steps);
        auto fit = fit_log_growth(separation);
        // A single e-fold above the early growth envelope is tolerated.
        double const measured = fit.finite ? fit.excess : kInfinity;
        add_max(ledger, "continuous_dependence", measured, 1.0);
    }

    return ledger;
}

}  // namespace radchem
