#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cbpmde/contamination.hpp"
#include "cbpmde/control.hpp"
#include "cbpmde/disparity.hpp"
#include "cbpmde/family.hpp"
#include "cbpmde/tree.hpp"

namespace cbpmde {

// Monte Carlo experiment over the contamination grid: for every (alpha, L)
// cell, replicated CBPs are simulated from the contaminated offspring law
// and theta is re-estimated on the clean parametric family.
struct ExperimentConfig {
    double theta0 = 7.0;
    double lambda = 0.3;
    std::int64_t z0 = 1;
    int n_max = 10;                       // horizon of the uncontaminated cell
    int replications = 100;
    std::vector<DisparityKind> disparities{DisparityKind::ld, DisparityKind::hd,
                                           DisparityKind::ned};
    std::vector<double> alphas;           // contamination grid; empty = no grid
    std::vector<std::int64_t> l_values;
    std::uint64_t seed_base = 1;
    ControlLaw control_law = ControlLaw::poisson_rate;
    // When set, the baseline cell simulates from this law instead of
    // family.pmf_at(theta0); estimation still runs on the family.
    std::optional<Pmf> offspring_override;

    ControlSpec control() const { return ControlSpec{control_law, lambda}; }
};

enum class ReplicationStatus {
    survived,     // alive at the cell's horizon (estimates present)
    extinct,      // died with Delta > 0
    inestimable,  // Delta = 0, no estimation possible
};

struct TrajectoryPoint {
    int generation = 0;
    std::int64_t delta = 0;             // Delta_{n-1}
    std::vector<double> theta_hat;      // aligned with config.disparities
};

struct BaselineRun {
    ReplicationStatus status = ReplicationStatus::inestimable;
    // One point per generation at which the process was alive.
    std::vector<TrajectoryPoint> trajectory;
};

struct CellRun {
    ReplicationStatus status = ReplicationStatus::inestimable;
    std::int64_t delta = 0;
    std::vector<double> theta_hat;      // survivors only, else empty
};

struct CellResult {
    double alpha = 0.0;
    std::int64_t L = 0;
    double tau_m = 0.0;
    int horizon = 0;
    std::vector<CellRun> runs;
};

struct ReplicationSet {
    ExperimentConfig config;
    std::vector<BaselineRun> baseline;   // the alpha = 0 cell, full trajectory
    std::vector<CellResult> cells;       // row-major over alphas x l_values
};

ReplicationSet run_experiment(const ExperimentConfig& config, const OffspringFamily& family);

// N^{-1} sum (estimate_i - theta0)^2.  Throws EmptySampleError on empty input.
double mse(std::span<const double> estimates, double theta0);

// MSE(a) / MSE(b) at a generation of the uncontaminated cell, over the
// replications estimable for both.  Throws DegenerateRatioError when the
// denominator vanishes.
double relative_efficiency(const ReplicationSet& set, DisparityKind a, DisparityKind b,
                           int generation);

struct NormalitySummary {
    std::vector<double> standardized;  // Delta^{1/2} (theta_hat - theta0) I(theta0)^{1/2}
    double mean = 0.0;
    double variance = 0.0;
    double ks_statistic = 1.0;         // sup distance to the standard normal cdf
    std::size_t sample_size = 0;
    bool insufficient_sample = false;  // fewer than 30 survivors
    bool degenerate = false;           // zero variance, flagged non-normal
};

NormalitySummary normality_diagnostic(const ReplicationSet& set, const OffspringFamily& family,
                                      double theta0, DisparityKind kind);

struct GridMethodStats {
    DisparityKind kind;
    std::size_t count = 0;   // estimable replications
    double mean = 0.0;
    double mse = 0.0;
};

struct GridCellReport {
    double alpha = 0.0;
    std::int64_t L = 0;
    double tau_m = 0.0;
    int horizon = 0;
    std::size_t survived = 0, extinct = 0, inestimable = 0;
    std::vector<GridMethodStats> methods;
    std::optional<DisparityKind> best;  // arg-min MSE when any estimates exist
};

std::vector<GridCellReport> grid_report(const ReplicationSet& set);

}  // namespace cbpmde
