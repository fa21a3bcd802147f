#pragma once

#include <cstdint>

#include "cbpmde/pmf.hpp"

namespace cbpmde {

// Gross-error mixture (1-alpha) p + alpha eta_L. Positive alpha plants an
// outlier at L; negative alpha models an inlier and is valid only while the
// mixture stays a probability distribution.
struct ContaminationSpec {
    double alpha = 0.0;
    std::int64_t location = 0;  // L
};

// Throws InvalidContaminationError when alpha >= 1 or when an inlier alpha
// drives some mass negative.
Pmf contaminate(const Pmf& base, const ContaminationSpec& spec);

// Asymptotic mean growth rate of the contaminated model:
// lambda * ((1-alpha) theta0 + alpha L).
double tau_m_contaminated(double theta0, double lambda, const ContaminationSpec& spec);

}  // namespace cbpmde
