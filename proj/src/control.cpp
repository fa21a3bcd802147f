#include "cbpmde/control.hpp"

#include <cmath>

namespace cbpmde {

double ControlSpec::mean(std::int64_t k) const {
    switch (law) {
        case ControlLaw::deterministic:
            return static_cast<double>(std::llround(rate * static_cast<double>(k)));
        case ControlLaw::poisson_rate:
            return rate * static_cast<double>(k);
    }
    return 0.0;
}

double ControlSpec::variance(std::int64_t k) const {
    switch (law) {
        case ControlLaw::deterministic:
            return 0.0;
        case ControlLaw::poisson_rate:
            return rate * static_cast<double>(k);
    }
    return 0.0;
}

}  // namespace cbpmde
