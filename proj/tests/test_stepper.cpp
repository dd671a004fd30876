#include <doctest.h>

#include <cmath>

#include "radchem/stepper.hpp"

using namespace radchem;

namespace
{
RunConfig base_config()
{
    RunConfig config;
    config.geometry = {2, 1.0};
    config.diffusion = {0.5, 1.0};
    config.boundary = {1.0};
    config.initial = initial::GaussianBump{10.0, 0.125, 0.0};
    config.cells = 64;
    config.t_end = 0.01;
    return config;
}

RadialProfile constant(GridHandle const& grid, double c)
{
    return RadialProfile(grid, std::vector<double>(grid->size(), c));
}
}  // namespace

TEST_CASE("face fluxes")
{
    auto grid = RadialGrid::make({1, 1.0}, 16);
    DiffusionLaw const law{0.0, 1.0};
    std::vector<double> still(17, 0.0);

    SUBCASE("constant profile without drift has no flux")
    {
        for (double f : face_flux(constant(grid, 2.0), still, law))
            CHECK(f == 0.0);
    }
    SUBCASE("diffusion flows down the gradient")
    {
        RadialProfile u(grid);
        for (std::size_t i = 0; i < u.size(); ++i)
            u[i] = static_cast<double>(i);
        auto flux = face_flux(u, still, law);
        CHECK(flux.front() == 0.0);
        CHECK(flux.back() == 0.0);
        // A = 2 in one dimension, gradient 1/dr = 16
        for (std::size_t f = 1; f < 16; ++f)
            CHECK(flux[f] == doctest::Approx(2.0 * 16.0));
    }
    SUBCASE("drift takes the upwind value")
    {
        std::vector<double> outward(17, 1.0);
        auto u = constant(grid, 0.0);
        u[4] = 3.0;
        auto flux = face_flux(u, outward, law);
        // mass leaves cell 4 through its outer face with speed 1
        CHECK(flux[5] == doctest::Approx(2.0 * (-16.0 * 3.0 - 3.0)));
        CHECK(flux[4] == doctest::Approx(2.0 * 16.0 * 3.0));
        CHECK(flux.back() == 0.0);
    }
    SUBCASE("non-finite input")
    {
        auto u = constant(grid, 1.0);
        u[2] = std::nan("");
        CHECK_THROWS_AS(face_flux(u, still, law), NumericalError);
    }
}

TEST_CASE("time-step restriction")
{
    auto grid = RadialGrid::make({1, 1.0}, 16);
    double const dr = 1.0 / 16;
    std::vector<double> still(17, 0.0);
    auto u = constant(grid, 1.0);

    CHECK(cfl_dt(u, still, {0.0, 2.0}, 0.5) == doctest::Approx(0.5 * dr * dr / 4.0));

    std::vector<double> fast(17, 100.0);
    CHECK(cfl_dt(u, fast, {0.0, 2.0}, 0.5) == doctest::Approx(0.5 * dr / 100.0));

    // D(1) = 1/2 with alpha = 1, kappa = 1
    CHECK(cfl_dt(u, still, {1.0, 1.0}, 1.0) == doctest::Approx(dr * dr));
}

TEST_CASE("initial state")
{
    auto config = base_config();
    auto state = make_initial_state(config);
    CHECK(state.t == 0.0);
    CHECK(state.step_index == 0);
    CHECK(state.initial_mass == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(state.dt > 0.0);
    CHECK(state.limits.u_max_threshold == doctest::Approx(1e6 * state.u.max_abs()));
    CHECK(state.limits.dt_min == doctest::Approx(1e-12 * state.dt));
    CHECK(state.elliptic.v.max_abs() <= 1.0);

    config.cells = 8;
    CHECK_THROWS_AS(make_initial_state(config), ConfigError);
}

TEST_CASE("one step conserves mass and positivity")
{
    for (int n : {1, 2, 3})
    {
        auto config = base_config();
        config.geometry.n = n;
        auto state = make_initial_state(config);
        auto outcome = step(state, config);
        REQUIRE(outcome.status == StepStatus::advanced);
        REQUIRE(outcome.state);
        auto const& next = *outcome.state;
        CHECK(next.step_index == 1);
        CHECK(next.t == doctest::Approx(state.dt));
        CHECK(std::abs(integrate(next.u) - state.initial_mass)
              <= 1e-13 * state.initial_mass);
        CHECK(next.u.min() >= 0.0);
        CHECK(next.min_u_watermark >= -1e-13);
    }
}

TEST_CASE("fault injection breaks conservation")
{
    auto config = base_config();
    auto state = make_initial_state(config);
    StepperOptions faulty;
    faulty.flip_outer_flux_cell = 3;
    auto outcome = step(state, config, faulty);
    REQUIRE(outcome.state);
    CHECK(std::abs(integrate(outcome.state->u) - state.initial_mass) > 1e-8);
}

TEST_CASE("step status")
{
    auto config = base_config();
    auto state = make_initial_state(config);

    SUBCASE("step below the floor")
    {
        state.dt = 0.5 * state.limits.dt_min;
        auto outcome = step(state, config);
        CHECK(outcome.status == StepStatus::dt_underflow);
        CHECK(!outcome.state);
        CHECK(outcome.measurement == state.dt);
    }
    SUBCASE("threshold")
    {
        state.limits.u_max_threshold = 0.5 * state.u.max_abs();
        auto outcome = step(state, config);
        CHECK(outcome.status == StepStatus::threshold_exceeded);
        CHECK(outcome.state);
        CHECK(outcome.measurement > state.limits.u_max_threshold);
    }
    SUBCASE("oversized step fails instead of going negative")
    {
        state.dt *= 1e4;
        auto outcome = step(state, config);
        CHECK(outcome.status == StepStatus::numerical_failure);
        CHECK(!outcome.state);
        CHECK(outcome.location);
    }
    CHECK(to_string(StepStatus::advanced) == "advanced");
    CHECK(to_string(StepStatus::threshold_exceeded) == "threshold_exceeded");
}

TEST_CASE("pure diffusion decays the L2 norm")
{
    auto config = base_config();
    config.diffusion = {0.0, 1.0};
    auto state = make_initial_state(config);
    StepperOptions options;
    options.zero_drift = true;
    double previous = lp_norm(state.u, 2.0).norm;
    for (int k = 0; k < 200; ++k)
    {
        auto outcome = step(state, config, options);
        REQUIRE(outcome.status == StepStatus::advanced);
        state = std::move(*outcome.state);
        state.dt = cfl_dt(state.u, state.elliptic.vr_faces, config.diffusion,
                          config.cfl_safety);
        double const current = lp_norm(state.u, 2.0).norm;
        CHECK(current <= previous * (1 + 1e-15));
        previous = current;
    }
}

TEST_CASE("zero density stays zero")
{
    auto config = base_config();
    config.initial = initial::Constant{0.0};
    config.t_end = 1e300;
    auto state = make_initial_state(config);
    for (int k = 0; k < 100; ++k)
    {
        auto outcome = step(state, config);
        REQUIRE(outcome.status == StepStatus::advanced);
        state = std::move(*outcome.state);
        CHECK(state.u.max_abs() == 0.0);
        CHECK(state.elliptic.v.min() == 1.0);
    }
}

TEST_CASE("advance")
{
    auto config = base_config();
    std::vector<Record> records;
    auto keep = [&](Record const& r, SimState const&) { records.push_back(r); };

    SUBCASE("zero horizon records the initial state only")
    {
        config.t_end = 0.0;
        auto result = advance(make_initial_state(config), config, keep);
        CHECK(result.steps == 0);
        CHECK(result.terminal.status == StepStatus::advanced);
        CHECK(records.size() == 1);
        CHECK(records[0].t == 0.0);
        CHECK(records[0].mass == doctest::Approx(10.0));
    }
    SUBCASE("lands exactly on the horizon")
    {
        config.output_stride = 7;
        auto result = advance(make_initial_state(config), config, keep);
        CHECK(result.final.t == config.t_end);
        CHECK(result.steps > 7);
        CHECK(records.front().step == 0);
        CHECK(records.back().step == result.steps);
        CHECK(records.back().t == config.t_end);
        for (std::size_t k = 1; k + 1 < records.size(); ++k)
            CHECK(records[k].step % 7 == 0);
        for (auto const& r : records)
        {
            CHECK(std::abs(r.mass - 10.0) <= 1e-11 * 10.0);
            CHECK(r.min_u >= 0.0);
            CHECK(r.lp.size() == 1);
        }
    }
    SUBCASE("stops at the threshold")
    {
        config.u_max_threshold = 1e-3;
        auto result = advance(make_initial_state(config), config, keep);
        CHECK(result.terminal.status == StepStatus::threshold_exceeded);
        CHECK(result.steps == 1);
        CHECK(records.size() == 2);
    }
}
