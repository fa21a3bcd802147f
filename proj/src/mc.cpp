#include "cbpmde/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "cbpmde/errors.hpp"
#include "cbpmde/mde.hpp"
#include "cbpmde/npmle.hpp"
#include "cbpmde/rng.hpp"

namespace cbpmde {

namespace {

// static partition; every index writes its own slot, so the result does not
// depend on scheduling
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const std::size_t workers = std::min<std::size_t>(hw, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

std::vector<double> estimate_all(const std::vector<DisparityKind>& kinds,
                                 const OffspringFamily& family, const Pmf& p_hat) {
    std::vector<double> out;
    out.reserve(kinds.size());
    for (const DisparityKind k : kinds)
        out.push_back(minimize_disparity(DisparitySpec::get(k), family, p_hat).theta_hat);
    return out;
}

BaselineRun run_baseline_replication(const ExperimentConfig& config,
                                     const OffspringFamily& family, const Pmf& offspring,
                                     std::uint64_t seed) {
    const FamilyTree tree =
        simulate(offspring, config.control(), config.z0, config.n_max, seed);

    BaselineRun run;
    std::int64_t delta = 0;
    std::vector<std::int64_t> y;
    for (int n = 1; n <= config.n_max; ++n) {
        const auto& row = tree.counts[static_cast<std::size_t>(n - 1)];
        delta += tree.phi[static_cast<std::size_t>(n - 1)];
        if (row.size() > y.size()) y.resize(row.size(), 0);
        for (std::size_t k = 0; k < row.size(); ++k) y[k] += row[k];

        if (tree.z[static_cast<std::size_t>(n)] <= 0 || delta <= 0) continue;
        std::vector<double> probs(y.size());
        for (std::size_t k = 0; k < y.size(); ++k)
            probs[k] = static_cast<double>(y[k]) / static_cast<double>(delta);
        const Pmf p_hat(std::move(probs), 0.0);
        run.trajectory.push_back(
            {n, delta, estimate_all(config.disparities, family, p_hat)});
    }

    if (tree.z.back() > 0)
        run.status = ReplicationStatus::survived;
    else
        run.status = delta > 0 ? ReplicationStatus::extinct : ReplicationStatus::inestimable;
    return run;
}

CellRun run_cell_replication(const ExperimentConfig& config, const OffspringFamily& family,
                             const Pmf& offspring, int horizon, std::uint64_t seed) {
    const FamilyTree tree = simulate(offspring, config.control(), config.z0, horizon, seed);
    CellRun run;
    const TreeTotals t = totals(tree);
    run.delta = t.delta;
    if (tree.z.back() > 0 && t.delta > 0) {
        run.status = ReplicationStatus::survived;
        run.theta_hat = estimate_all(config.disparities, family, npmle(tree));
    } else {
        run.status =
            t.delta > 0 ? ReplicationStatus::extinct : ReplicationStatus::inestimable;
    }
    return run;
}

std::size_t disparity_index(const ExperimentConfig& config, DisparityKind kind) {
    for (std::size_t i = 0; i < config.disparities.size(); ++i)
        if (config.disparities[i] == kind) return i;
    throw std::invalid_argument("disparity not part of the experiment config");
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

ReplicationSet run_experiment(const ExperimentConfig& config, const OffspringFamily& family) {
    if (config.replications < 1) throw std::invalid_argument("replications must be >= 1");

    ReplicationSet set;
    set.config = config;

    const Pmf base_pmf = family.pmf_at(config.theta0, family.support_bound(1e-12));
    const Pmf& baseline_offspring =
        config.offspring_override ? *config.offspring_override : base_pmf;

    const std::size_t N = static_cast<std::size_t>(config.replications);
    set.baseline.resize(N);
    parallel_for(N, [&](std::size_t i) {
        set.baseline[i] = run_baseline_replication(config, family, baseline_offspring,
                                                   config.seed_base + i);
    });

    std::size_t cell_index = 0;
    for (const double alpha : config.alphas) {
        for (const std::int64_t L : config.l_values) {
            const ContaminationSpec cspec{alpha, L};
            CellResult cell;
            cell.alpha = alpha;
            cell.L = L;
            cell.tau_m = tau_m_contaminated(config.theta0, config.lambda, cspec);
            cell.horizon = generations_for_rate(cell.tau_m);
            const Pmf offspring = contaminate(base_pmf, cspec);

            // per-cell seed stream, decorrelated from the baseline stream
            const std::uint64_t cell_base =
                splitmix64(splitmix64(config.seed_base) + cell_index + 1);
            cell.runs.resize(N);
            parallel_for(N, [&](std::size_t i) {
                cell.runs[i] = run_cell_replication(config, family, offspring,
                                                    cell.horizon, cell_base + i);
            });
            set.cells.push_back(std::move(cell));
            ++cell_index;
        }
    }
    return set;
}

double mse(std::span<const double> estimates, double theta0) {
    if (estimates.empty()) throw EmptySampleError("mse of an empty estimate set");
    double acc = 0.0;
    for (const double e : estimates) {
        const double d = e - theta0;
        acc += d * d;
    }
    return acc / static_cast<double>(estimates.size());
}

double relative_efficiency(const ReplicationSet& set, DisparityKind a, DisparityKind b,
                           int generation) {
    const std::size_t ia = disparity_index(set.config, a);
    const std::size_t ib = disparity_index(set.config, b);
    std::vector<double> ea, eb;
    for (const BaselineRun& run : set.baseline) {
        for (const TrajectoryPoint& pt : run.trajectory) {
            if (pt.generation == generation) {
                ea.push_back(pt.theta_hat[ia]);
                eb.push_back(pt.theta_hat[ib]);
            }
        }
    }
    if (ea.empty()) throw EmptySampleError("no estimable replications at this generation");
    const double num = mse(ea, set.config.theta0);
    const double den = mse(eb, set.config.theta0);
    if (den == 0.0) throw DegenerateRatioError("zero MSE in the efficiency denominator");
    return num / den;
}

NormalitySummary normality_diagnostic(const ReplicationSet& set, const OffspringFamily& family,
                                      double theta0, DisparityKind kind) {
    const std::size_t idx = disparity_index(set.config, kind);
    const double info = fisher_information(family, theta0, family.support_bound(1e-12));

    NormalitySummary summary;
    for (const BaselineRun& run : set.baseline) {
        if (run.status != ReplicationStatus::survived) continue;
        for (const TrajectoryPoint& pt : run.trajectory) {
            if (pt.generation != set.config.n_max) continue;
            summary.standardized.push_back(std::sqrt(static_cast<double>(pt.delta)) *
                                           (pt.theta_hat[idx] - theta0) * std::sqrt(info));
        }
    }
    const std::size_t n = summary.standardized.size();
    summary.sample_size = n;
    summary.insufficient_sample = n < 30;
    if (n == 0) {
        summary.degenerate = true;
        return summary;
    }

    double mean = 0.0;
    for (const double v : summary.standardized) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const double v : summary.standardized) var += (v - mean) * (v - mean);
    var = n > 1 ? var / static_cast<double>(n - 1) : 0.0;
    summary.mean = mean;
    summary.variance = var;
    summary.degenerate = var == 0.0;

    std::vector<double> sorted = summary.standardized;
    std::sort(sorted.begin(), sorted.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double cdf = normal_cdf(sorted[i]);
        const double lo = static_cast<double>(i) / static_cast<double>(n);
        const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
        ks = std::max({ks, std::fabs(cdf - lo), std::fabs(cdf - hi)});
    }
    summary.ks_statistic = ks;
    return summary;
}

std::vector<GridCellReport> grid_report(const ReplicationSet& set) {
    std::vector<GridCellReport> out;
    out.reserve(set.cells.size());
    for (const CellResult& cell : set.cells) {
        GridCellReport rep;
        rep.alpha = cell.alpha;
        rep.L = cell.L;
        rep.tau_m = cell.tau_m;
        rep.horizon = cell.horizon;
        for (const CellRun& run : cell.runs) {
            switch (run.status) {
                case ReplicationStatus::survived: ++rep.survived; break;
                case ReplicationStatus::extinct: ++rep.extinct; break;
                case ReplicationStatus::inestimable: ++rep.inestimable; break;
            }
        }
        double best_mse = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < set.config.disparities.size(); ++i) {
            GridMethodStats stats;
            stats.kind = set.config.disparities[i];
            double sum = 0.0, sq = 0.0;
            for (const CellRun& run : cell.runs) {
                if (run.status != ReplicationStatus::survived) continue;
                const double th = run.theta_hat[i];
                ++stats.count;
                sum += th;
                sq += (th - set.config.theta0) * (th - set.config.theta0);
            }
            if (stats.count > 0) {
                stats.mean = sum / static_cast<double>(stats.count);
                stats.mse = sq / static_cast<double>(stats.count);
                if (stats.mse < best_mse) {
                    best_mse = stats.mse;
                    rep.best = stats.kind;
                }
            }
            rep.methods.push_back(stats);
        }
        out.push_back(std::move(rep));
    }
    return out;
}

}  // namespace cbpmde
