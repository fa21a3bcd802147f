#include "cbpmde/contamination.hpp"

#include <algorithm>
#include <cstddef>

#include "cbpmde/errors.hpp"

namespace cbpmde {

Pmf contaminate(const Pmf& base, const ContaminationSpec& spec) {
    if (spec.alpha >= 1.0) throw InvalidContaminationError("alpha must be < 1");
    if (spec.location < 0) throw InvalidContaminationError("gross-error location must be >= 0");

    const std::size_t L = static_cast<std::size_t>(spec.location);
    std::vector<double> q(std::max(base.size(), L + 1), 0.0);
    for (std::size_t k = 0; k < base.size(); ++k) q[k] = (1.0 - spec.alpha) * base.probs[k];
    q[L] += spec.alpha;

    if (q[L] < 0.0) {
        // the only entry an inlier alpha can push negative
        if (q[L] < -1e-15)
            throw InvalidContaminationError("inlier alpha too negative for this base pmf");
        q[L] = 0.0;
    }
    return Pmf(std::move(q), (1.0 - spec.alpha) * base.tail_mass);
}

double tau_m_contaminated(double theta0, double lambda, const ContaminationSpec& spec) {
    return lambda * ((1.0 - spec.alpha) * theta0 +
                     spec.alpha * static_cast<double>(spec.location));
}

}  // namespace cbpmde
