#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "radchem/lab.hpp"

namespace radchem
{

std::string_view to_string(VerdictKind kind)
{
    switch (kind)
    {
        case VerdictKind::bounded:
            return "bounded";
        case VerdictKind::blowup_suspected:
            return "blowup_suspected";
        case VerdictKind::inconclusive:
            return "inconclusive";
        case VerdictKind::tolerance_failure:
            return "tolerance_failure";
    }
    return "inconclusive";
}

bool Ledger::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(),
                       [](CheckResult const& c) { return c.pass; });
}

CheckResult const* Ledger::find(std::string_view name) const
{
    for (auto const& check : checks)
    {
        if (check.name == name)
            return &check;
    }
    return nullptr;
}

void write_ledger(std::ostream& os, Ledger const& ledger)
{
    for (auto const& check : ledger.checks)
    {
        fmt::print(os, "CHECK {} {} measured={:.6g} tol={:.6g}\n", check.name,
                   check.pass ? "pass" : "fail", check.measured, check.tol);
    }
}

bool plateau_reached(std::vector<Record> const& series, double t_end)
{
    if (series.empty())
    {
        return false;
    }
    double const window_start = (1.0 - kPlateauWindow) * t_end;
    double baseline = series.front().linf;
    double window_max = 0.0;
    bool any_in_window = false;
    for (auto const& record : series)
    {
        if (record.t <= window_start)
        {
            baseline = record.linf;
        }
        if (record.t >= window_start)
        {
            window_max = std::max(window_max, record.linf);
            any_in_window = true;
        }
    }
    if (!any_in_window)
    {
        return false;
    }
    if (baseline == 0.0)
    {
        return window_max == 0.0;
    }
    return window_max - baseline < kPlateauGrowth * baseline;
}

namespace
{
// Worst-case tracker for the invariants checked on every record.
class OnlineChecks
{
  public:
    OnlineChecks(double initial_mass, double M, Geometry const& geometry)
        : mass0_(initial_mass)
        , M_(M)
        , flux_cap_(M * boundary_flux_bound(initial_mass, geometry))
        , flux_slack_(kFluxSlack * std::max(1.0, flux_cap_))
    {
    }

    void observe(Record const& record, SimState const& state)
    {
        double const drift = mass0_ > 0.0
                                 ? std::abs(record.mass - mass0_) / mass0_
                                 : std::abs(record.mass);
        mass_drift_ = std::max(mass_drift_, drift);
        check(drift <= kMassTolerance, "mass_conservation", record.t);

        auto const& v = state.elliptic.v;
        double const below = -v.min() / M_;
        double above = 0.0;
        for (double x : v.values())
            above = std::max(above, (x - M_) / M_);
        v_below_ = std::max(v_below_, below);
        v_above_ = std::max(v_above_, above);
        check(below <= kVBoundTolerance && above <= kVBoundTolerance,
              "v_bounds", record.t);

        double const excess = record.dv_dnu - flux_cap_;
        flux_excess_ = std::max(flux_excess_, excess);
        check(excess <= flux_slack_, "flux_bound", record.t);

        negative_u_ = std::max(negative_u_, -record.min_u);
        check(record.min_u >= 0.0, "positivity", record.t);
    }

    std::optional<std::pair<double, std::string>> const& violation() const
    {
        return violation_;
    }

    Ledger ledger() const
    {
        Ledger out;
        out.checks.push_back({"mass_conservation",
                              mass_drift_ <= kMassTolerance, mass_drift_,
                              kMassTolerance});
        out.checks.push_back({"v_lower_bound", v_below_ <= kVBoundTolerance,
                              v_below_, kVBoundTolerance});
        out.checks.push_back({"v_upper_bound", v_above_ <= kVBoundTolerance,
                              v_above_, kVBoundTolerance});
        out.checks.push_back({"flux_bound", flux_excess_ <= flux_slack_,
                              flux_excess_, flux_slack_});
        out.checks.push_back(
            {"positivity", negative_u_ <= 0.0, negative_u_, 0.0});
        return out;
    }

  private:
    void check(bool ok, char const* name, double t)
    {
        if (!ok && !violation_)
        {
            violation_ = std::make_pair(t, std::string(name));
        }
    }

    double mass0_;
    double M_;
    double flux_cap_;
    double flux_slack_;
    double mass_drift_ = 0.0;
    double v_below_ = 0.0;
    double v_above_ = 0.0;
    double flux_excess_ = -kInfinity;
    double negative_u_ = 0.0;
    std::optional<std::pair<double, std::string>> violation_;
};
}  // namespace

CaseReport run_case(RunConfig const& config, StepperOptions const& options)
{
    auto const start = std::chrono::steady_clock::now();
    CaseReport report;
    report.config = config;

    SimState initial = make_initial_state(config);
    report.initial_linf = initial.u.max_abs();
    report.initial_state = initial;
    OnlineChecks checks(initial.initial_mass, config.boundary.M,
                        config.geometry);

    auto recorder = [&](Record const& record, SimState const& state) {
        checks.observe(record, state);
        report.peak_linf = std::max(report.peak_linf, record.linf);
        report.series.push_back(record);
    };
    AdvanceResult result
        = advance(std::move(initial), config, recorder, options);

    report.terminal_status = result.terminal.status;
    report.terminal_t = result.final.t;
    report.steps = result.steps;
    report.peak_linf = std::max(report.peak_linf, result.final.u.max_abs());
    report.online = checks.ledger();
    report.final_state = std::move(result.final);

    Verdict& verdict = report.verdict;
    if (auto const& violation = checks.violation())
    {
        verdict = {VerdictKind::tolerance_failure, violation->first,
                   violation->second};
    }
    else
    {
        switch (result.terminal.status)
        {
            case StepStatus::numerical_failure:
                verdict = {VerdictKind::tolerance_failure, report.terminal_t,
                           "numerical_failure"};
                break;
            case StepStatus::threshold_exceeded:
            case StepStatus::dt_underflow:
                verdict = {VerdictKind::blowup_suspected, report.terminal_t,
                           std::string(to_string(result.terminal.status))};
                break;
            case StepStatus::advanced:
                if (report.terminal_t >= config.t_end
                    && plateau_reached(report.series, config.t_end))
                {
                    verdict = {VerdictKind::bounded, report.terminal_t, ""};
                }
                else
                {
                    verdict = {VerdictKind::inconclusive, report.terminal_t,
                               "no_plateau"};
                }
                break;
        }
    }

    report.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return report;
}

void write_series_csv(std::ostream& os,
                      RunConfig const& config,
                      std::vector<Record> const& series)
{
    os << "t,dt,step,mass,linf";
    for (double p : config.lp_exponents)
    {
        fmt::print(os, ",lp_{:g}", p);
    }
    os << ",trace_u,dv_dnu,min_u\n";
    for (auto const& r : series)
    {
        fmt::print(os, "{},{},{},{},{}", r.t, r.dt, r.step,
                   r.mass, r.linf);
        for (double norm : r.lp)
        {
            fmt::print(os, ",{}", norm);
        }
        fmt::print(os, ",{},{},{}\n", r.trace_u, r.dv_dnu,
                   r.min_u);
    }
}

void write_case_report(std::ostream& os, CaseReport const& report)
{
    write_ledger(os, report.online);
    auto const& v = report.verdict;
    fmt::print(os, "VERDICT {} t={}", to_string(v.kind), v.t_star);
    if (!v.detail.empty())
    {
        fmt::print(os, " detail={}", v.detail);
    }
    if (v.kind == VerdictKind::blowup_suspected)
    {
        os << " note=numerical_evidence_not_proof";
    }
    fmt::print(os, " peak_linf={} initial_linf={} steps={}\n",
               report.peak_linf, report.initial_linf, report.steps);
}

}  // namespace radchem
