#include "cbpmde/robust.hpp"

#include <algorithm>
#include <cmath>

#include "cbpmde/contamination.hpp"

namespace cbpmde {

namespace {

Pmf contaminated_model(const OffspringFamily& family, double theta, double alpha,
                       std::int64_t L) {
    const Pmf base = family.pmf_at(theta, family.support_bound(1e-12));
    return contaminate(base, ContaminationSpec{alpha, L});
}

}  // namespace

InfluenceReport alpha_influence(const DisparitySpec& spec, const OffspringFamily& family,
                                double theta, double alpha,
                                std::span<const std::int64_t> L_values) {
    const double info = fisher_information(family, theta, family.support_bound(1e-12));
    InfluenceReport report;
    report.alpha = alpha;
    report.L_values.assign(L_values.begin(), L_values.end());
    report.curve.reserve(L_values.size());
    report.limit_curve.reserve(L_values.size());
    for (const std::int64_t L : L_values) {
        const MdeResult r = minimize_disparity(spec, family,
                                               contaminated_model(family, theta, alpha, L));
        report.curve.push_back((r.theta_hat - theta) / alpha);
        const std::size_t k = static_cast<std::size_t>(L);
        report.limit_curve.push_back(family.deriv_at(theta, k) /
                                     (info * family.mass_at(theta, k)));
    }
    return report;
}

std::vector<double> influence_limit_check(const DisparitySpec& spec,
                                          const OffspringFamily& family, double theta,
                                          std::int64_t L, std::span<const double> alphas) {
    std::vector<double> out;
    out.reserve(alphas.size());
    for (const double alpha : alphas) {
        const MdeResult r = minimize_disparity(spec, family,
                                               contaminated_model(family, theta, alpha, L));
        out.push_back((r.theta_hat - theta) / alpha);
    }
    return out;
}

double potential_bias(const DisparitySpec& spec, const OffspringFamily& family,
                      double theta0, double alpha, std::int64_t L) {
    const Pmf base = family.pmf_at(theta0, family.support_bound(1e-12));
    const double t_base = minimize_disparity(spec, family, base).theta_hat;
    const double t_mix =
        minimize_disparity(spec, family, contaminate(base, ContaminationSpec{alpha, L}))
            .theta_hat;
    return t_mix - t_base;
}

double hellinger_affinity(const Pmf& q, const Pmf& model) {
    const std::size_t n = std::max(q.size(), model.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += std::sqrt(q.mass(k) * model.mass(k));
    return acc;
}

BreakdownReport breakdown_probe(const DisparitySpec& spec, const OffspringFamily& family,
                                double theta, double alpha,
                                std::span<const std::int64_t> L_schedule) {
    BreakdownReport report;
    report.L_schedule.assign(L_schedule.begin(), L_schedule.end());
    for (const std::int64_t L : L_schedule) {
        const MdeResult r = minimize_disparity(spec, family,
                                               contaminated_model(family, theta, alpha, L));
        report.estimate.push_back(r.theta_hat);
        report.near_tie.push_back(r.near_tie);
    }
    return report;
}

double breakdown_threshold(double rho_hat, double rho_star) {
    const double gap = rho_hat - rho_star;
    return gap * gap / (1.0 + gap * gap);
}

double hellinger_breakdown_bound(const OffspringFamily& family, const Pmf& q) {
    const std::size_t K = family.support_bound(1e-12);
    const double theta_hat =
        minimize_disparity(DisparitySpec::hellinger(), family, q).theta_hat;
    const double rho_hat = hellinger_affinity(q, family.pmf_at(theta_hat, K));
    const double rho_star =
        std::max(hellinger_affinity(q, family.pmf_at(family.theta_lo(), K)),
                 hellinger_affinity(q, family.pmf_at(family.theta_hi(), K)));
    return breakdown_threshold(rho_hat, rho_star);
}

}  // namespace cbpmde
