#pragma once

#include <cstdint>

namespace cbpmde {

enum class ControlLaw {
    deterministic,  // phi(k) = round(rate * k), variance 0
    poisson_rate,   // phi(k) ~ Poisson(rate * k)
};

// Control mechanism phi_n(k): how many of k individuals reproduce.
struct ControlSpec {
    ControlLaw law = ControlLaw::poisson_rate;
    double rate = 0.3;

    double mean(std::int64_t k) const;
    double variance(std::int64_t k) const;

    // tau = lim_k mean(k)/k; equals rate for both laws.
    double tau() const { return rate; }
};

}  // namespace cbpmde
