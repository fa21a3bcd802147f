#include "doctest.h"

#include <cmath>
#include <string_view>
#include <vector>

#include "cbpmde/errors.hpp"
#include "cbpmde/family.hpp"
#include "cbpmde/mc.hpp"

using namespace cbpmde;

namespace {

const PoissonFamily poisson;

ExperimentConfig section6_config() {
    ExperimentConfig config;  // theta0 = 7, lambda = 0.3, z0 = 1, n = 10
    config.seed_base = 20170805;
    return config;
}

// extinction probability by generation n from the offspring pgf of the
// equivalent embedded process: h(s) = exp(lambda (e^{theta(s-1)} - 1))
double pgf_survival(double theta, double lambda, int n) {
    double q = 0.0;
    for (int i = 0; i < n; ++i) q = std::exp(lambda * (std::exp(theta * (q - 1.0)) - 1.0));
    return 1.0 - q;
}

}  // namespace

TEST_CASE("mse") {
    CHECK(mse(std::vector<double>{7.0, 7.0, 7.0}, 7.0) == 0.0);
    CHECK(mse(std::vector<double>{8.0}, 7.0) == 1.0);
    CHECK(mse(std::vector<double>{6.0, 8.0}, 7.0) == 1.0);
    CHECK_THROWS_AS(mse(std::vector<double>{}, 7.0), EmptySampleError);
}

TEST_CASE("doubling experiment produces the degenerate estimate") {
    ExperimentConfig config;
    config.replications = 1;
    config.n_max = 5;
    config.z0 = 1;
    config.lambda = 1.0;
    config.control_law = ControlLaw::deterministic;
    config.disparities = {DisparityKind::ld};
    config.offspring_override = Pmf::point_mass(2);

    const ReplicationSet set = run_experiment(config, poisson);
    REQUIRE(set.baseline.size() == 1);
    REQUIRE(set.baseline[0].status == ReplicationStatus::survived);
    const TrajectoryPoint& last = set.baseline[0].trajectory.back();
    CHECK(last.generation == 5);
    CHECK(std::fabs(last.theta_hat[0] - 2.0) < 1e-6);
}

TEST_CASE("survival fraction matches the pgf oracle") {
    ExperimentConfig config = section6_config();
    config.replications = 2000;
    config.disparities = {};  // survival only, skip estimation work
    const ReplicationSet set = run_experiment(config, poisson);

    std::size_t survived = 0;
    for (const BaselineRun& run : set.baseline)
        if (run.status == ReplicationStatus::survived) ++survived;
    const double frac = static_cast<double>(survived) / 2000.0;

    const double p = pgf_survival(7.0, 0.3, 10);  // ~0.204
    const double se = std::sqrt(p * (1.0 - p) / 2000.0);
    CHECK(frac > 0.0);
    CHECK(std::fabs(frac - p) < 3.0 * se);
}

TEST_CASE("experiment reruns are identical") {
    ExperimentConfig config = section6_config();
    config.replications = 30;
    config.alphas = {0.2};
    config.l_values = {7};
    const ReplicationSet a = run_experiment(config, poisson);
    const ReplicationSet b = run_experiment(config, poisson);
    REQUIRE(a.baseline.size() == b.baseline.size());
    for (std::size_t i = 0; i < a.baseline.size(); ++i) {
        CHECK(a.baseline[i].status == b.baseline[i].status);
        REQUIRE(a.baseline[i].trajectory.size() == b.baseline[i].trajectory.size());
        for (std::size_t j = 0; j < a.baseline[i].trajectory.size(); ++j) {
            CHECK(a.baseline[i].trajectory[j].delta == b.baseline[i].trajectory[j].delta);
            CHECK(a.baseline[i].trajectory[j].theta_hat ==
                  b.baseline[i].trajectory[j].theta_hat);
        }
    }
    REQUIRE(a.cells.size() == 1);
    for (std::size_t i = 0; i < a.cells[0].runs.size(); ++i) {
        CHECK(a.cells[0].runs[i].status == b.cells[0].runs[i].status);
        CHECK(a.cells[0].runs[i].theta_hat == b.cells[0].runs[i].theta_hat);
    }
}

TEST_CASE("invalid grid cells propagate contamination errors") {
    ExperimentConfig config = section6_config();
    config.replications = 2;
    config.alphas = {-0.5};  // far past the inlier validity bound at L = 0
    config.l_values = {0};
    CHECK_THROWS_AS(run_experiment(config, poisson), InvalidContaminationError);

    ExperimentConfig zero = section6_config();
    zero.replications = 0;
    CHECK_THROWS_AS(run_experiment(zero, poisson), std::invalid_argument);
}

TEST_CASE("relative efficiency") {
    ExperimentConfig config = section6_config();
    config.replications = 60;
    const ReplicationSet set = run_experiment(config, poisson);

    // a disparity against itself is exactly 1 where defined
    const double self = relative_efficiency(set, DisparityKind::hd, DisparityKind::hd, 10);
    CHECK(self == 1.0);

    const double hd_ned = relative_efficiency(set, DisparityKind::hd, DisparityKind::ned, 10);
    CHECK(hd_ned > 0.0);
    CHECK(std::isfinite(hd_ned));

    CHECK_THROWS_AS(relative_efficiency(set, DisparityKind::ld, DisparityKind::hd, 0),
                    EmptySampleError);
}

TEST_CASE("normality diagnostic flags degenerate and short samples") {
    ExperimentConfig config = section6_config();
    config.replications = 3;
    ReplicationSet set;
    set.config = config;
    set.baseline.resize(3);
    for (std::size_t i = 0; i < 3; ++i) {
        set.baseline[i].status = ReplicationStatus::survived;
        set.baseline[i].trajectory.push_back({10, 100, {7.0, 7.0, 7.0}});
    }
    const NormalitySummary s = normality_diagnostic(set, poisson, 7.0, DisparityKind::hd);
    CHECK(s.sample_size == 3);
    CHECK(s.insufficient_sample);
    CHECK(s.degenerate);  // all estimates equal theta0, variance 0
    CHECK(s.variance == 0.0);
}

TEST_CASE("normality diagnostic on a real run") {
    ExperimentConfig config = section6_config();
    config.replications = 300;
    config.disparities = {DisparityKind::ned};
    const ReplicationSet set = run_experiment(config, poisson);
    const NormalitySummary s = normality_diagnostic(set, poisson, 7.0, DisparityKind::ned);
    REQUIRE(s.sample_size > 30);
    CHECK_FALSE(s.insufficient_sample);
    CHECK_FALSE(s.degenerate);
    CHECK(std::fabs(s.mean) < 1.0);
    CHECK(s.variance > 0.2);
    CHECK(s.variance < 3.0);
    CHECK(s.ks_statistic < 0.2);
}

TEST_CASE("grid report bookkeeping") {
    ExperimentConfig config = section6_config();
    config.replications = 15;
    config.alphas = {0.2};
    config.l_values = {7, 20};
    const ReplicationSet set = run_experiment(config, poisson);
    const auto cells = grid_report(set);
    REQUIRE(cells.size() == 2);

    for (const GridCellReport& cell : cells) {
        CHECK(cell.survived + cell.extinct + cell.inestimable == 15);
        CHECK(cell.tau_m ==
              doctest::Approx(0.3 * (0.8 * 7.0 + 0.2 * static_cast<double>(cell.L))));
        CHECK(cell.horizon == generations_for_rate(cell.tau_m));
        for (const GridMethodStats& m : cell.methods) {
            CHECK(m.count == cell.survived);
            if (m.count > 0) CHECK(m.mse >= 0.0);
        }
        if (cell.survived > 0) CHECK(cell.best.has_value());
    }
    CHECK(cells[0].L == 7);
    CHECK(cells[1].L == 20);
    CHECK(cells[1].horizon < cells[0].horizon);  // faster growth, shorter watch
}
