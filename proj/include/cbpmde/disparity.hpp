#pragma once

#include <functional>
#include <string_view>

#include "cbpmde/family.hpp"
#include "cbpmde/pmf.hpp"

namespace cbpmde {

enum class DisparityKind { ld, hd, ned };

std::string_view to_string(DisparityKind k);

// A disparity measure rho(q, theta) = sum_k G(delta_k) p_k(theta) over the
// Pearson residuals delta_k = q_k / p_k(theta) - 1, together with its
// residual adjustment function A (standardized so A(0)=0, A'(0)=1) and the
// limit rules at support mismatches.
//
// Shipped instances:
//   LD   G(d) = (d+1)log(d+1) - d        A(d) = d
//   HD   G(d) = (sqrt(d+1)-1)^2          A(d) = 2(sqrt(d+1)-1)
//   NED  G(d) = exp(-d) - 1              A(d) = 2-(2+d)exp(-d)
//
// The LD generator carries the extra -d term (a pointwise-nonnegative
// Kullback-Leibler integrand); on full supports the -d part sums to zero, so
// values and minimizers agree with the (d+1)log(d+1) form while each term
// stays nonnegative and A coincides with the unstandardized RAF.
class DisparitySpec {
public:
    using Fn = std::function<double(double)>;
    // Contribution of one support point, G(q/p - 1) * p, in a form that is
    // stable when p underflows.
    using TermFn = std::function<double(double /*qk*/, double /*pk*/)>;

    static const DisparitySpec& likelihood();            // LD
    static const DisparitySpec& hellinger();             // HD
    static const DisparitySpec& negative_exponential();  // NED
    static const DisparitySpec& get(DisparityKind k);

    // Custom measure (used by tests for shifted G variants).
    DisparitySpec(std::string_view name, DisparityKind kind, Fn g, Fn g_prime,
                  Fn raf, TermFn term, double zero_model_mass_weight,
                  bool bounded_g, bool bounded_raf_family);

    std::string_view name() const { return name_; }
    DisparityKind kind() const { return kind_; }

    double g(double delta) const { return g_(delta); }
    double g_prime(double delta) const { return g_prime_(delta); }

    // Standardized residual adjustment function.
    double raf(double delta) const { return raf_(delta); }

    // One term of the disparity sum.
    double term(double qk, double pk) const { return term_(qk, pk); }

    // Contribution of a point where p_k(theta) = 0 < q_k:
    // +inf for LD, q_k for HD, 0 for NED (the continuity limits of term()).
    double zero_model_mass_term(double qk) const;

    bool bounded_g() const { return bounded_g_; }
    // Condition (A5): A, A', A'(1+d), A''(1+d) all bounded on [-1, inf).
    bool bounded_raf_family() const { return bounded_raf_family_; }

private:
    std::string_view name_;
    DisparityKind kind_;
    Fn g_, g_prime_, raf_;
    TermFn term_;
    double zero_model_mass_weight_;  // multiplies q_k; +inf encodes the LD rule
    bool bounded_g_, bounded_raf_family_;
};

// Pearson residual q_k / p_k(theta) - 1 in [-1, inf); returns +inf when
// p_k = 0 < q_k and -1 when q_k = 0.
double pearson_residual(const Pmf& q, const Pmf& model, std::size_t k);

// rho(q, theta) over the union of both supports; model tail mass contributes
// at the q = 0 residual. +inf propagates (LD with unmatched support).
double disparity_value(const DisparitySpec& spec, const Pmf& q, const Pmf& model);

// d rho / d theta = -sum_k p'_k(theta) w(delta_k) where w is the RAF up to
// its affine standardization (which never moves the zero set).  Throws
// GradientUndefinedError for LD when some residual is infinite.
double disparity_gradient(const DisparitySpec& spec, const OffspringFamily& family,
                          const Pmf& q, double theta);

}  // namespace cbpmde
