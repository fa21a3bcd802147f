#pragma once

#include <optional>

#include "cbpmde/disparity.hpp"
#include "cbpmde/family.hpp"
#include "cbpmde/pmf.hpp"
#include "cbpmde/tree.hpp"

namespace cbpmde {

struct MdeResult {
    double theta_hat = 0.0;
    double value = 0.0;  // attained disparity, may be +inf-free by construction
    // |d rho / d theta| at theta_hat, absent when the gradient is undefined.
    std::optional<double> stationarity;
    int iterations = 0;     // golden-section iterations
    double bracket = 0.0;   // final search interval width
    // Two non-adjacent scan cells within 1e-6 of the minimum.
    bool near_tie = false;
};

struct MinimizeOptions {
    int scan_points = 256;
    double theta_tol = 1e-8;
};

// argmin over [theta_lo, theta_hi] of disparity_value(spec, q, p(theta)):
// coarse scan, golden-section refinement to theta_tol, ties resolved toward
// the smallest theta, then a derivative polish when the gradient brackets a
// sign change.  Throws NoFiniteValueError when every scan cell is +inf.
MdeResult minimize_disparity(const DisparitySpec& spec, const OffspringFamily& family,
                             const Pmf& q, const MinimizeOptions& opts = {});

// T^rho applied to the nonparametric MLE of the tree's offspring law.
MdeResult mde_from_tree(const DisparitySpec& spec, const OffspringFamily& family,
                        const FamilyTree& tree);

}  // namespace cbpmde
