#include "cbpmde/disparity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cbpmde/errors.hpp"

namespace cbpmde {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// --- likelihood disparity -------------------------------------------------
// G(d) = (d+1)log(d+1) - d; each term q log(q/p) - q + p is nonnegative and
// the -d part sums to zero over full supports.

double ld_g(double d) {
    if (d <= -1.0) return 1.0;  // limit of (d+1)log(d+1) - d at d = -1
    return (d + 1.0) * std::log1p(d) - d;
}

double ld_g_prime(double d) { return std::log1p(d); }

double ld_term(double q, double p) {
    if (q <= 0.0) return p;
    return q * (std::log(q) - std::log(p)) - q + p;
}

// --- squared Hellinger distance -------------------------------------------

double hd_g(double d) {
    const double r = std::sqrt(d + 1.0) - 1.0;
    return r * r;
}

double hd_g_prime(double d) { return 1.0 - 1.0 / std::sqrt(d + 1.0); }

double hd_term(double q, double p) {
    const double r = std::sqrt(q) - std::sqrt(p);
    return r * r;
}

// --- negative exponential disparity ----------------------------------------
// Values use the raw G(d) = exp(-d) - 1; gradients use the standardized RAF
// (the constant shift is killed by sum p'_k = 0).

double ned_g(double d) { return std::exp(-d) - 1.0; }

double ned_g_prime(double d) { return -std::exp(-d); }

double ned_term(double q, double p) {
    const double x = q / p;  // exp(1-x) underflows cleanly for huge x
    if (!std::isfinite(x)) return -p;
    return (std::exp(1.0 - x) - 1.0) * p;
}

// --- standardized residual adjustment functions -----------------------------

double ld_raf(double d) { return d; }
double hd_raf(double d) { return 2.0 * (std::sqrt(d + 1.0) - 1.0); }
double ned_raf(double d) { return 2.0 - (2.0 + d) * std::exp(-d); }

}  // namespace

std::string_view to_string(DisparityKind k) {
    switch (k) {
        case DisparityKind::ld: return "ld";
        case DisparityKind::hd: return "hd";
        case DisparityKind::ned: return "ned";
    }
    return "?";
}

DisparitySpec::DisparitySpec(std::string_view name, DisparityKind kind, Fn g, Fn g_prime,
                             Fn raf, TermFn term, double zero_model_mass_weight,
                             bool bounded_g, bool bounded_raf_family)
    : name_(name),
      kind_(kind),
      g_(std::move(g)),
      g_prime_(std::move(g_prime)),
      raf_(std::move(raf)),
      term_(std::move(term)),
      zero_model_mass_weight_(zero_model_mass_weight),
      bounded_g_(bounded_g),
      bounded_raf_family_(bounded_raf_family) {}

const DisparitySpec& DisparitySpec::likelihood() {
    static const DisparitySpec spec("LD", DisparityKind::ld, ld_g, ld_g_prime, ld_raf,
                                    ld_term, kInf, false, false);
    return spec;
}

const DisparitySpec& DisparitySpec::hellinger() {
    static const DisparitySpec spec("HD", DisparityKind::hd, hd_g, hd_g_prime, hd_raf,
                                    hd_term, 1.0, false, false);
    return spec;
}

const DisparitySpec& DisparitySpec::negative_exponential() {
    static const DisparitySpec spec("NED", DisparityKind::ned, ned_g, ned_g_prime, ned_raf,
                                    ned_term, 0.0, true, true);
    return spec;
}

const DisparitySpec& DisparitySpec::get(DisparityKind k) {
    switch (k) {
        case DisparityKind::ld: return likelihood();
        case DisparityKind::hd: return hellinger();
        case DisparityKind::ned: return negative_exponential();
    }
    throw std::logic_error("unknown disparity kind");
}

double DisparitySpec::zero_model_mass_term(double qk) const {
    return zero_model_mass_weight_ * qk;
}

double pearson_residual(const Pmf& q, const Pmf& model, std::size_t k) {
    const double p = model.mass(k);
    const double qv = q.mass(k);
    if (p > 0.0) return qv / p - 1.0;
    return qv > 0.0 ? kInf : -1.0;
}

double disparity_value(const DisparitySpec& spec, const Pmf& q, const Pmf& model) {
    const std::size_t n = std::max(q.size(), model.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double pk = model.mass(k);
        const double qk = q.mass(k);
        if (pk > 0.0) {
            acc += spec.term(qk, pk);
        } else if (qk > 0.0) {
            acc += spec.zero_model_mass_term(qk);
            if (std::isinf(acc)) return acc;
        }
    }
    // the model tail sits at residual -1 (q carries no mass out there)
    if (model.tail_mass > 0.0) acc += spec.term(0.0, model.tail_mass);
    return acc;
}

double disparity_gradient(const DisparitySpec& spec, const OffspringFamily& family,
                          const Pmf& q, double theta) {
    const std::size_t K = std::max(family.support_bound(1e-12),
                                   q.size() > 0 ? q.size() - 1 : 0);
    double acc = 0.0;
    for (std::size_t k = 0; k <= K; ++k) {
        const double pk = family.mass_at(theta, k);
        const double qk = q.mass(k);
        if (pk > 0.0) {
            const double dp = family.deriv_at(theta, k);
            switch (spec.kind()) {
                case DisparityKind::ld:
                    // p' * delta computed as u (q - p)
                    acc += dp / pk * (qk - pk);
                    break;
                case DisparityKind::hd: {
                    // p' (sqrt(d+1) - 1) = u (sqrt(q p) - p)
                    acc += dp / pk * (std::sqrt(qk * pk) - pk);
                    break;
                }
                case DisparityKind::ned: {
                    const double x = qk / pk;
                    const double w = std::isfinite(x) ? 2.0 - (1.0 + x) * std::exp(1.0 - x)
                                                      : 2.0;
                    acc += dp * w;
                    break;
                }
            }
        } else if (qk > 0.0) {
            // analytic limits: the HD and NED terms vanish with p'_k, the LD
            // weight diverges
            if (spec.kind() == DisparityKind::ld)
                throw GradientUndefinedError(
                    "likelihood-disparity gradient undefined at infinite residual");
        }
    }
    return -acc;
}

}  // namespace cbpmde
