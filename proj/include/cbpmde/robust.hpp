#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cbpmde/disparity.hpp"
#include "cbpmde/family.hpp"
#include "cbpmde/mde.hpp"

namespace cbpmde {

// Population-level robustness analytics on exact contaminated models.

struct InfluenceReport {
    double alpha = 0.0;
    std::vector<std::int64_t> L_values;
    // alpha^{-1} (T^rho(p(theta,alpha,L)) - theta) per L.
    std::vector<double> curve;
    // Influence-curve limit p'_L(theta) / (I(theta) p_L(theta)) per L.
    std::vector<double> limit_curve;
};

InfluenceReport alpha_influence(const DisparitySpec& spec, const OffspringFamily& family,
                                double theta, double alpha,
                                std::span<const std::int64_t> L_values);

// The alpha-influence at L along a decreasing alpha sequence; the tail of the
// returned vector approaches the influence-curve limit.
std::vector<double> influence_limit_check(const DisparitySpec& spec,
                                          const OffspringFamily& family, double theta,
                                          std::int64_t L, std::span<const double> alphas);

// T^rho(p(theta0,alpha,L)) - T^rho(p(theta0)); the base functional is
// computed, not assumed equal to theta0.
double potential_bias(const DisparitySpec& spec, const OffspringFamily& family,
                      double theta0, double alpha, std::int64_t L);

// sum_k sqrt(q_k p_k) in [0, 1].
double hellinger_affinity(const Pmf& q, const Pmf& model);

struct BreakdownReport {
    std::vector<std::int64_t> L_schedule;
    std::vector<double> estimate;    // T^rho(p(theta,alpha,L)) per L
    std::vector<bool> near_tie;      // scan-level near-tie flag per L
};

BreakdownReport breakdown_probe(const DisparitySpec& spec, const OffspringFamily& family,
                                double theta, double alpha,
                                std::span<const std::int64_t> L_schedule);

// Theorem-7(ii) style threshold (rho_hat - rho_star)^2 / (1 + (rho_hat - rho_star)^2).
double breakdown_threshold(double rho_hat, double rho_star);

// The threshold evaluated for a concrete q: rho_hat is the affinity at the
// Hellinger functional's minimizer, rho_star the larger endpoint affinity
// (the computable proxy for the far-parameter limit on a compact interval).
double hellinger_breakdown_bound(const OffspringFamily& family, const Pmf& q);

}  // namespace cbpmde
