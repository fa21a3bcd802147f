#include "cbpmde/pmf.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace cbpmde {

Pmf::Pmf(std::vector<double> p, double tail) : probs(std::move(p)), tail_mass(tail) {}

double Pmf::sum() const {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
}

double Pmf::mean() const {
    double m = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) m += static_cast<double>(k) * probs[k];
    return m;
}

std::size_t Pmf::max_support() const {
    for (std::size_t k = probs.size(); k > 0; --k) {
        if (probs[k - 1] > 0.0) return k - 1;
    }
    return 0;
}

bool Pmf::is_valid() const {
    if (tail_mass < 0.0) return false;
    for (double p : probs) {
        if (!(p >= 0.0) || !std::isfinite(p)) return false;
    }
    const double total = sum() + tail_mass;
    return total >= 1.0 - kNormTol && total <= 1.0 + kNormTol;
}

void Pmf::check() const {
    if (!is_valid()) throw std::invalid_argument("pmf invariants violated");
}

Pmf Pmf::point_mass(std::size_t k) {
    std::vector<double> p(k + 1, 0.0);
    p[k] = 1.0;
    return Pmf(std::move(p));
}

double l1_distance(const Pmf& a, const Pmf& b) {
    const std::size_t n = std::max(a.size(), b.size());
    double d = 0.0;
    for (std::size_t k = 0; k < n; ++k) d += std::fabs(a.mass(k) - b.mass(k));
    return d + std::fabs(a.tail_mass - b.tail_mass);
}

}  // namespace cbpmde
