#include "cbpmde/tree.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "cbpmde/errors.hpp"
#include "cbpmde/rng.hpp"

namespace cbpmde {

bool FamilyTree::is_valid() const {
    const std::size_t n = phi.size();
    if (z.size() != n + 1 || counts.size() != n) return false;
    if (z.empty()) return false;
    for (std::int64_t v : z)
        if (v < 0) return false;
    for (std::size_t l = 0; l < n; ++l) {
        if (phi[l] < 0) return false;
        std::int64_t classified = 0, offspring = 0;
        for (std::size_t k = 0; k < counts[l].size(); ++k) {
            if (counts[l][k] < 0) return false;
            classified += counts[l][k];
            offspring += static_cast<std::int64_t>(k) * counts[l][k];
        }
        if (classified != phi[l]) return false;   // every progenitor classified
        if (offspring != z[l + 1]) return false;  // offspring bookkeeping closes
    }
    return true;
}

void FamilyTree::check() const {
    if (!is_valid()) throw std::invalid_argument("family-tree bookkeeping violated");
}

namespace {

// inverse-CDF sampler over a truncated pmf, tail mass folded into the last bucket
struct OffspringSampler {
    std::vector<double> cdf;

    explicit OffspringSampler(const Pmf& pmf) {
        cdf.resize(pmf.size());
        double acc = 0.0;
        for (std::size_t k = 0; k < pmf.size(); ++k) {
            acc += pmf.probs[k];
            cdf[k] = acc;
        }
        if (!cdf.empty()) cdf.back() = 1.0;
    }

    std::size_t operator()(std::mt19937_64& rng) const {
        const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        return it == cdf.end() ? cdf.size() - 1
                               : static_cast<std::size_t>(it - cdf.begin());
    }
};

std::int64_t draw_control(const ControlSpec& control, std::int64_t z, std::mt19937_64& rng) {
    switch (control.law) {
        case ControlLaw::deterministic:
            return std::llround(control.rate * static_cast<double>(z));
        case ControlLaw::poisson_rate: {
            if (z == 0) return 0;
            std::poisson_distribution<std::int64_t> dist(control.rate *
                                                         static_cast<double>(z));
            return dist(rng);
        }
    }
    return 0;
}

}  // namespace

FamilyTree simulate(const Pmf& offspring, const ControlSpec& control, std::int64_t z0,
                    int generations, std::uint64_t seed) {
    if (generations < 1) throw std::invalid_argument("need at least one generation");
    if (z0 < 0) throw std::invalid_argument("z0 must be nonnegative");

    auto rng = make_engine(seed);
    const OffspringSampler sample(offspring);

    FamilyTree tree;
    tree.z.reserve(static_cast<std::size_t>(generations) + 1);
    tree.z.push_back(z0);
    for (int l = 0; l < generations; ++l) {
        const std::int64_t phi = draw_control(control, tree.z.back(), rng);
        std::vector<std::int64_t> row;
        std::int64_t next = 0;
        for (std::int64_t j = 0; j < phi; ++j) {
            const std::size_t k = sample(rng);
            if (k >= row.size()) row.resize(k + 1, 0);
            ++row[k];
            next += static_cast<std::int64_t>(k);
        }
        tree.phi.push_back(phi);
        tree.counts.push_back(std::move(row));
        tree.z.push_back(next);  // phi = 0 leaves the empty sum at 0
    }
    return tree;
}

FamilyTree simulate(const OffspringFamily& family, double theta, const ControlSpec& control,
                    std::int64_t z0, int generations, std::uint64_t seed) {
    const Pmf offspring = family.pmf_at(theta, family.support_bound(1e-12));
    return simulate(offspring, control, z0, generations, seed);
}

TreeTotals totals(const FamilyTree& tree) {
    TreeTotals t;
    for (std::size_t l = 0; l < tree.generations(); ++l) {
        t.delta += tree.phi[l];
        if (tree.counts[l].size() > t.y.size()) t.y.resize(tree.counts[l].size(), 0);
        for (std::size_t k = 0; k < tree.counts[l].size(); ++k) t.y[k] += tree.counts[l][k];
    }
    return t;
}

int generations_for_rate(double tau_m) {
    if (tau_m <= 1.0)
        throw SubcriticalScheduleError("no observation horizon for tau_m <= 1");
    // constant-information schedule anchored at (4.8, 8): tau_m^n ~ 4.8^8,
    // capped at the 65 generations used for tau_m = 1.05
    const double n = 8.0 * std::log(4.8) / std::log(tau_m);
    const double rounded = std::ceil(n);
    return static_cast<int>(std::clamp(rounded, 8.0, 65.0));
}

}  // namespace cbpmde
