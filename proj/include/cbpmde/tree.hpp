#pragma once

#include <cstdint>
#include <vector>

#include "cbpmde/control.hpp"
#include "cbpmde/family.hpp"
#include "cbpmde/pmf.hpp"

namespace cbpmde {

// Complete family-tree sample of a controlled branching process observed up
// to generation n:
//   z[l]         generation sizes Z_0..Z_n
//   phi[l]       progenitor counts, l = 0..n-1
//   counts[l][k] number of generation-l progenitors with exactly k offspring
struct FamilyTree {
    std::vector<std::int64_t> z;
    std::vector<std::int64_t> phi;
    std::vector<std::vector<std::int64_t>> counts;

    std::size_t generations() const { return phi.size(); }

    bool is_valid() const;
    void check() const;  // throws std::invalid_argument on broken bookkeeping
};

struct TreeTotals {
    std::int64_t delta = 0;          // total progenitors over all generations
    std::vector<std::int64_t> y;     // total progenitors by offspring count
};

// Simulate z0 -> n generations; offspring drawn i.i.d. from the family at
// theta (truncated inverse-CDF with the tail folded into the last bucket),
// progenitor counts drawn from the control law. Deterministic given seed.
FamilyTree simulate(const OffspringFamily& family, double theta, const ControlSpec& control,
                    std::int64_t z0, int generations, std::uint64_t seed);

// Same, with an explicit offspring law (used for contaminated models).
FamilyTree simulate(const Pmf& offspring, const ControlSpec& control,
                    std::int64_t z0, int generations, std::uint64_t seed);

TreeTotals totals(const FamilyTree& tree);

// Observation horizon for a contaminated model with asymptotic mean growth
// rate tau_m: generations with tau_m^n comparable to 4.8^8, clamped to
// [8, 65].  Throws SubcriticalScheduleError when tau_m <= 1.
int generations_for_rate(double tau_m);

}  // namespace cbpmde
