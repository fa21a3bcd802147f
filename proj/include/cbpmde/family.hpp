#pragma once

#include <cstddef>
#include <string_view>

#include "cbpmde/pmf.hpp"

namespace cbpmde {

// Parametric offspring family theta -> p(theta) on a compact interval
// [theta_lo, theta_hi], with analytic derivatives in theta.
class OffspringFamily {
public:
    virtual ~OffspringFamily() = default;

    virtual std::string_view name() const = 0;
    virtual double theta_lo() const = 0;
    virtual double theta_hi() const = 0;

    bool in_domain(double theta) const {
        return theta >= theta_lo() && theta <= theta_hi();
    }

    // {p_k(theta)}_{k=0..K} with tail_mass = 1 - sum.
    // Throws std::domain_error when theta is outside the domain.
    virtual Pmf pmf_at(double theta, std::size_t K) const = 0;

    // Single mass p_k(theta); must stay finite for any k (underflow to 0 is fine).
    virtual double mass_at(double theta, std::size_t k) const = 0;

    // d p_k / d theta and d^2 p_k / d theta^2.
    virtual double deriv_at(double theta, std::size_t k) const = 0;
    virtual double second_deriv_at(double theta, std::size_t k) const = 0;

    // Smallest K such that the tail mass beyond K is < eps for every theta
    // in the domain.
    virtual std::size_t support_bound(double eps) const = 0;
};

// u(theta, k) = p'_k(theta) / p_k(theta).
// Throws UndefinedScoreError when p_k(theta) == 0.
double score(const OffspringFamily& family, double theta, std::size_t k);

// I(theta) = sum_{k<=K} u(theta,k)^2 p_k(theta).
double fisher_information(const OffspringFamily& family, double theta, std::size_t K);

// Poisson offspring law, theta = mean.
class PoissonFamily : public OffspringFamily {
public:
    explicit PoissonFamily(double lo = 0.1, double hi = 30.0) : lo_(lo), hi_(hi) {}

    std::string_view name() const override { return "poisson"; }
    double theta_lo() const override { return lo_; }
    double theta_hi() const override { return hi_; }

    Pmf pmf_at(double theta, std::size_t K) const override;
    double mass_at(double theta, std::size_t k) const override;
    double deriv_at(double theta, std::size_t k) const override;
    double second_deriv_at(double theta, std::size_t k) const override;
    std::size_t support_bound(double eps) const override;

private:
    void require_domain(double theta) const;
    double lo_, hi_;
};

}  // namespace cbpmde
