#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "radchem/config.hpp"
#include "radchem/model.hpp"
#include "radchem/stepper.hpp"

namespace radchem
{

enum class VerdictKind
{
    bounded,
    blowup_suspected,
    inconclusive,
    tolerance_failure,
};

std::string_view to_string(VerdictKind kind);

struct Verdict
{
    VerdictKind kind = VerdictKind::inconclusive;
    double t_star = 0.0;  // time of the trigger or violation
    std::string detail;   // trigger, failed check or inconclusive reason
};

/// One line of a pass/fail ledger: `CHECK <name> <pass|fail> measured=<v> tol=<t>`.
struct CheckResult
{
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double tol = 0.0;
};

struct Ledger
{
    std::vector<CheckResult> checks;

    bool all_pass() const;
    CheckResult const* find(std::string_view name) const;
};

void write_ledger(std::ostream& os, Ledger const& ledger);

// Online tolerances applied to every record of a case.
inline constexpr double kMassTolerance = 1e-11;
inline constexpr double kVBoundTolerance = 1e-12;
inline constexpr double kFluxSlack = 1e-8;
// Bounded: max ||u||_inf over the last 20% of the horizon grows < 1%.
inline constexpr double kPlateauWindow = 0.2;
inline constexpr double kPlateauGrowth = 0.01;

struct CaseReport
{
    RunConfig config;
    std::vector<Record> series;
    Verdict verdict;
    StepStatus terminal_status = StepStatus::advanced;
    double initial_linf = 0.0;
    double peak_linf = 0.0;
    double terminal_t = 0.0;
    std::size_t steps = 0;
    double wall_ms = 0.0;
    // Worst-case values of the online checks over the run.
    Ledger online;
    SimState initial_state;
    SimState final_state;
};

/// Run one trajectory with online invariant checks and assign a verdict.
CaseReport run_case(RunConfig const& config, StepperOptions const& options = {});

/// Plateau test on a recorded series (exposed for testing).
bool plateau_reached(std::vector<Record> const& series, double t_end);

/// Recorder time series as CSV: `t,dt,step,mass,linf,lp_<p>...,trace_u,dv_dnu,min_u`.
void write_series_csv(std::ostream& os,
                      RunConfig const& config,
                      std::vector<Record> const& series);

/// Check lines for the online ledger followed by a VERDICT line.
void write_case_report(std::ostream& os, CaseReport const& report);

//---------------------------------------------------------------------------//
// Verification harness

struct Convergence
{
    std::vector<int> cells;
    std::vector<double> errors;
    double order = 0.0;  // least-squares slope of -log(error) vs log(N)
};

/// Least-squares observed order from a refinement ladder.
double observed_order(std::vector<int> const& cells,
                      std::vector<double> const& errors);

/// Max-norm error of solve_v with u = 1, n = 1, R = M = 1 against
/// cosh(r)/cosh(1).
Convergence elliptic_oracle_1d(std::vector<int> const& cells);

/// Max-norm error of solve_v with u = 4, n = 3 against
/// M (R/r) sinh(2r)/sinh(2R).
Convergence elliptic_oracle_3d(std::vector<int> const& cells,
                               double R = 1.0,
                               double M = 1.0);

/// L2(B_R) distance between face-difference v_r and the integral
/// representation for u0 of `config` on each grid of the ladder.
Convergence vr_representation(RunConfig const& config,
                              std::vector<int> const& cells);

struct Separation
{
    std::vector<double> t;
    std::vector<double> w;  // int (u1 - u2)^2
};

/// Integrate u0 and u0 + eps (1 + cos(pi r / R)) with a shared step size.
Separation paired_separation(RunConfig const& config,
                             double eps,
                             std::size_t steps);

struct GrowthFit
{
    double slope = 0.0;      // least-squares slope of log w(t) vs t
    double envelope = 0.0;   // rate fitted on the first half, clamped >= 0
    double excess = 0.0;     // max e-folds above the envelope on the second half
    bool finite = false;
};

/// At-most-exponential separation diagnostic for log w(t).
GrowthFit fit_log_growth(Separation const& separation);

struct VerifyOptions
{
    StepperOptions stepper;
    std::size_t steps = 200;
};

/// Short trajectory plus closed-form oracles, one named check each.
Ledger verify_suite(RunConfig const& config, VerifyOptions const& options = {});

//---------------------------------------------------------------------------//
// Sweeps

struct DataVariant
{
    std::string id;
    ConfigEntries entries;  // overrides applied on top of the base
};

struct SweepPlan
{
    ConfigEntries base;
    std::vector<double> alphas;
    std::vector<DataVariant> variants;
    ConfigEntries overrides;  // applied to every case, below variant entries
    int workers = 1;

    void validate() const;
};

SweepPlan parse_plan(std::string const& text);
SweepPlan load_plan(std::filesystem::path const& path);

/// Case config: base, then plan overrides, then variant entries, then alpha.
RunConfig case_config(SweepPlan const& plan, double alpha, DataVariant const& data);

struct SweepRow
{
    double alpha = 0.0;
    std::string data_id;
    VerdictKind verdict = VerdictKind::inconclusive;
    std::string detail;
    double initial_linf = 0.0;
    double peak_linf = 0.0;
    double terminal_t = 0.0;
    std::size_t steps = 0;
    double wall_ms = 0.0;
};

using CaseRunner = std::function<CaseReport(RunConfig const&)>;

/// Runs the alpha x variant cross product on `plan.workers` threads with
/// static round-robin assignment. Rows come back sorted by (alpha, data id).
std::vector<SweepRow> run_sweep(SweepPlan const& plan,
                                CaseRunner const& runner = {});

enum class Timing
{
    include,
    omit,  // wall_ms written as 0 for byte-reproducible tables
};

void write_sweep_csv(std::ostream& os,
                     std::vector<SweepRow> const& rows,
                     Timing timing = Timing::include);

}  // namespace radchem
