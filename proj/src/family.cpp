#include "cbpmde/family.hpp"

#include <cmath>
#include <stdexcept>

#include "cbpmde/errors.hpp"

namespace cbpmde {

double score(const OffspringFamily& family, double theta, std::size_t k) {
    const double p = family.mass_at(theta, k);
    if (p <= 0.0) throw UndefinedScoreError("score undefined: p_k(theta) = 0");
    return family.deriv_at(theta, k) / p;
}

double fisher_information(const OffspringFamily& family, double theta, std::size_t K) {
    double info = 0.0;
    for (std::size_t k = 0; k <= K; ++k) {
        const double p = family.mass_at(theta, k);
        if (p <= 0.0) continue;
        const double d = family.deriv_at(theta, k);
        info += d * d / p;  // u^2 p = (p'/p)^2 p
    }
    return info;
}

void PoissonFamily::require_domain(double theta) const {
    if (!in_domain(theta)) throw std::domain_error("theta outside the parameter interval");
}

Pmf PoissonFamily::pmf_at(double theta, std::size_t K) const {
    require_domain(theta);
    std::vector<double> p(K + 1);
    // forward recurrence p_{k+1} = p_k theta/(k+1); underflows cleanly to 0
    double pk = std::exp(-theta);
    double acc = 0.0;
    for (std::size_t k = 0; k <= K; ++k) {
        p[k] = pk;
        acc += pk;
        pk *= theta / static_cast<double>(k + 1);
    }
    double tail = 1.0 - acc;
    if (tail < 0.0) tail = 0.0;
    return Pmf(std::move(p), tail);
}

double PoissonFamily::mass_at(double theta, std::size_t k) const {
    require_domain(theta);
    // log form handles arbitrary k; underflow gives an honest 0
    const double logp = -theta + static_cast<double>(k) * std::log(theta) -
                        std::lgamma(static_cast<double>(k) + 1.0);
    return std::exp(logp);
}

double PoissonFamily::deriv_at(double theta, std::size_t k) const {
    // p'_k = p_k (k/theta - 1)
    return mass_at(theta, k) * (static_cast<double>(k) / theta - 1.0);
}

double PoissonFamily::second_deriv_at(double theta, std::size_t k) const {
    const double u = static_cast<double>(k) / theta - 1.0;
    return mass_at(theta, k) * (u * u - static_cast<double>(k) / (theta * theta));
}

std::size_t PoissonFamily::support_bound(double eps) const {
    // Poisson tails at fixed K shrink as theta decreases, so the bound at
    // theta_hi covers the whole interval.
    const double theta = hi_;
    double pk = std::exp(-theta);
    double acc = pk;
    std::size_t k = 0;
    while (1.0 - acc >= eps && k < 100000) {
        ++k;
        pk *= theta / static_cast<double>(k);
        acc += pk;
    }
    return k;
}

}  // namespace cbpmde
