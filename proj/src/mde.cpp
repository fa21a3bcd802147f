#include "cbpmde/mde.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cbpmde/errors.hpp"
#include "cbpmde/npmle.hpp"

namespace cbpmde {

namespace {

constexpr double kNearTieTol = 1e-6;
constexpr double kPolishWindow = 1e-5;

struct Objective {
    const DisparitySpec& spec;
    const OffspringFamily& family;
    const Pmf& q;
    std::size_t K;

    double operator()(double theta) const {
        return disparity_value(spec, q, family.pmf_at(theta, K));
    }
};

}  // namespace

MdeResult minimize_disparity(const DisparitySpec& spec, const OffspringFamily& family,
                             const Pmf& q, const MinimizeOptions& opts) {
    const double lo = family.theta_lo();
    const double hi = family.theta_hi();
    const std::size_t K = std::max(family.support_bound(1e-12),
                                   q.size() > 0 ? q.size() - 1 : 0);
    const Objective f{spec, family, q, K};

    // coarse scan; strict '<' keeps the smallest theta on ties
    const int G = opts.scan_points;
    std::vector<double> vals(G);
    int best = -1;
    for (int i = 0; i < G; ++i) {
        const double th = lo + (hi - lo) * static_cast<double>(i) / (G - 1);
        vals[i] = f(th);
        if (best < 0 || vals[i] < vals[best]) best = i;
    }
    if (std::isinf(vals[best]))
        throw NoFiniteValueError("disparity is infinite over the whole scan grid");

    MdeResult result;
    for (int i = 0; i < G; ++i) {
        if (std::abs(i - best) > 1 && vals[i] <= vals[best] + kNearTieTol) {
            result.near_tie = true;
            break;
        }
    }

    const auto grid_theta = [&](int i) {
        return lo + (hi - lo) * static_cast<double>(i) / (G - 1);
    };
    double a = grid_theta(std::max(best - 1, 0));
    double b = grid_theta(std::min(best + 1, G - 1));

    double best_theta = grid_theta(best);
    double best_value = vals[best];

    // golden-section refinement; f(c) <= f(d) keeps the left interval so
    // exact ties drift toward the smaller theta
    static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    int iterations = 0;
    while (b - a > opts.theta_tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
            if (fc < best_value) { best_value = fc; best_theta = c; }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
            if (fd < best_value) { best_value = fd; best_theta = d; }
        }
        ++iterations;
    }
    result.iterations = iterations;
    result.bracket = b - a;

    const double mid = 0.5 * (a + b);
    const double fmid = f(mid);
    if (fmid < best_value) { best_value = fmid; best_theta = mid; }

    // Derivative polish: golden section alone bottoms out near
    // sqrt(eps)-level comparisons, while the gradient crosses zero with slope
    // about I(theta) and bisects to machine precision.
    const auto grad = [&](double th) { return disparity_gradient(spec, family, q, th); };
    try {
        double pa = std::max(lo, best_theta - kPolishWindow);
        double pb = std::min(hi, best_theta + kPolishWindow);
        double ga = grad(pa), gb = grad(pb);
        if (std::isfinite(ga) && std::isfinite(gb) && ga < 0.0 && gb > 0.0) {
            for (int i = 0; i < 100 && pb - pa > 0.0; ++i) {
                const double m = 0.5 * (pa + pb);
                if (grad(m) < 0.0) pa = m; else pb = m;
            }
            const double cand = 0.5 * (pa + pb);
            const double fcand = f(cand);
            if (fcand <= best_value + 1e-12 * (1.0 + std::fabs(best_value))) {
                best_theta = cand;
                best_value = std::min(fcand, best_value);
            }
        }
    } catch (const GradientUndefinedError&) {
        // LD with an infinite residual; keep the golden-section answer
    }

    result.theta_hat = best_theta;
    result.value = best_value;
    try {
        result.stationarity = std::fabs(grad(best_theta));
    } catch (const GradientUndefinedError&) {
        result.stationarity.reset();
    }
    return result;
}

MdeResult mde_from_tree(const DisparitySpec& spec, const OffspringFamily& family,
                        const FamilyTree& tree) {
    return minimize_disparity(spec, family, npmle(tree));
}

}  // namespace cbpmde
