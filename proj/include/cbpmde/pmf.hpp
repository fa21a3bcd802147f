#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cbpmde {

// Finite-support probability mass function on {0, 1, 2, ...}.
//
// probs[k] is the mass at k; tail_mass carries whatever lies beyond the
// stored range so that sum(probs) + tail_mass stays 1 up to kNormTol.
struct Pmf {
    std::vector<double> probs;
    double tail_mass = 0.0;

    static constexpr double kNormTol = 1e-9;

    Pmf() = default;
    explicit Pmf(std::vector<double> p, double tail = 0.0);

    // Mass at k; zero beyond the stored range.
    double mass(std::size_t k) const {
        return k < probs.size() ? probs[k] : 0.0;
    }

    std::size_t size() const { return probs.size(); }

    double sum() const;
    double mean() const;

    // Largest k with probs[k] > 0, or 0 for an all-zero pmf.
    std::size_t max_support() const;

    bool is_valid() const;
    // Throws std::invalid_argument when the invariants fail.
    void check() const;

    static Pmf point_mass(std::size_t k);
};

double l1_distance(const Pmf& a, const Pmf& b);

}  // namespace cbpmde
