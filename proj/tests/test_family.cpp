#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "cbpmde/contamination.hpp"
#include "cbpmde/control.hpp"
#include "cbpmde/errors.hpp"
#include "cbpmde/family.hpp"

using namespace cbpmde;

namespace {

const PoissonFamily family;

// brute-force Poisson mass, independent of the family implementation
double poisson_mass(double theta, int k) {
    double p = std::exp(-theta);
    for (int i = 1; i <= k; ++i) p *= theta / i;
    return p;
}

}  // namespace

TEST_CASE("poisson pmf values and truncation") {
    const std::size_t K = family.support_bound(1e-12);
    const Pmf p = family.pmf_at(7.0, K);
    CHECK(p.is_valid());
    CHECK(p.probs[0] == doctest::Approx(std::exp(-7.0)).epsilon(1e-12));
    CHECK(p.tail_mass < 1e-12);

    double mean = p.mean();
    CHECK(std::fabs(mean - 7.0) < 1e-9);

    CHECK_THROWS_AS(family.pmf_at(0.05, 10), std::domain_error);
    CHECK_THROWS_AS(family.pmf_at(31.0, 10), std::domain_error);
}

TEST_CASE("poisson identifiability on a grid") {
    const std::size_t K = family.support_bound(1e-12);
    for (double a = 0.5; a < 30.0; a += 3.1) {
        CHECK(family.pmf_at(a, K).is_valid());
        for (double b = a + 0.7; b < 30.0; b += 3.7) {
            CHECK(l1_distance(family.pmf_at(a, K), family.pmf_at(b, K)) > 0.0);
        }
    }
}

TEST_CASE("second derivatives match central second differences") {
    const double h = 1e-4;
    for (double theta : {2.0, 7.0, 15.0}) {
        for (int k = 0; k <= 40; ++k) {
            const double fd = (poisson_mass(theta + h, k) - 2.0 * poisson_mass(theta, k) +
                               poisson_mass(theta - h, k)) /
                              (h * h);
            const double an = family.second_deriv_at(theta, k);
            if (std::fabs(fd) < 1e-7) {
                CHECK(std::fabs(an - fd) < 1e-7);
            } else {
                CHECK(std::fabs(an - fd) / std::fabs(fd) < 1e-4);
            }
        }
    }
}

TEST_CASE("score closed forms") {
    CHECK(score(family, 7.0, 7) == doctest::Approx(0.0));
    CHECK(score(family, 7.0, 20) == doctest::Approx(13.0 / 7.0));
    CHECK(score(family, 7.0, 0) == doctest::Approx(-1.0));
    // a mass that underflows to zero has no defined score
    CHECK_THROWS_AS(score(family, 0.1, 400), UndefinedScoreError);
}

TEST_CASE("score consistency with the derivative") {
    for (double theta : {0.5, 2.0, 7.0, 15.0, 29.5}) {
        for (int k = 0; k <= 50; ++k) {
            const double lhs = family.deriv_at(theta, k);
            const double rhs = family.mass_at(theta, k) * score(family, theta, k);
            CHECK(std::fabs(lhs - rhs) < 1e-10);
        }
    }
}

TEST_CASE("derivatives match central finite differences") {
    const double h = 1e-6;
    for (double theta : {2.0, 7.0, 15.0}) {
        for (int k = 0; k <= 40; ++k) {
            const double fd =
                (poisson_mass(theta + h, k) - poisson_mass(theta - h, k)) / (2.0 * h);
            const double an = family.deriv_at(theta, k);
            if (std::fabs(fd) < 1e-9) {
                // at k = theta the derivative crosses zero; relative error is
                // meaningless there
                CHECK(std::fabs(an - fd) < 1e-9);
            } else {
                CHECK(std::fabs(an - fd) / std::fabs(fd) < 1e-5);
            }
        }
    }
}

TEST_CASE("fisher information equals 1/theta for poisson") {
    // brute-force oracle: direct sum of u^2 p over k <= 200
    const auto brute = [](double theta) {
        double acc = 0.0;
        for (int k = 0; k <= 200; ++k) {
            const double u = k / theta - 1.0;
            acc += u * u * poisson_mass(theta, k);
        }
        return acc;
    };
    CHECK(fisher_information(family, 7.0, 200) == doctest::Approx(brute(7.0)).epsilon(1e-12));
    CHECK(std::fabs(fisher_information(family, 7.0, 200) - 1.0 / 7.0) < 1e-9);
    CHECK(std::fabs(fisher_information(family, 1.0, 200) - 1.0) < 1e-9);
    for (double theta : {0.3, 4.0, 18.0, 29.0})
        CHECK(fisher_information(family, theta, 300) > 0.0);
}

TEST_CASE("control spec moments") {
    const ControlSpec pois{ControlLaw::poisson_rate, 0.3};
    CHECK(pois.mean(10) == doctest::Approx(3.0));
    CHECK(pois.variance(10) == doctest::Approx(3.0));
    CHECK(pois.tau() == doctest::Approx(0.3));

    const ControlSpec det{ControlLaw::deterministic, 1.0};
    CHECK(det.mean(5) == 5.0);
    CHECK(det.variance(5) == 0.0);
}

TEST_CASE("contaminate") {
    const std::size_t K = family.support_bound(1e-12);
    const Pmf base = family.pmf_at(7.0, K);

    SUBCASE("alpha = 0 is the identity") {
        const Pmf q = contaminate(base, {0.0, 5});
        for (std::size_t k = 0; k < base.size(); ++k) CHECK(q.probs[k] == base.probs[k]);
    }
    SUBCASE("outlier mass lands at L") {
        const Pmf q = contaminate(base, {0.2, 20});
        CHECK(q.mass(20) == doctest::Approx(0.8 * base.mass(20) + 0.2).epsilon(1e-14));
        CHECK(q.is_valid());
    }
    SUBCASE("inlier validity bound at L = 0") {
        const double p0 = base.mass(0);
        const double bound = p0 / (1.0 - p0);  // ~9.127e-4, so -0.0009 stays legal
        CHECK(bound > 0.0009);
        const Pmf q = contaminate(base, {-0.0009, 0});
        CHECK(q.is_valid());
        CHECK(q.mass(0) > 0.0);
        CHECK_THROWS_AS(contaminate(base, {-(bound + 1e-5), 0}), InvalidContaminationError);
    }
    SUBCASE("alpha >= 1 rejected") {
        CHECK_THROWS_AS(contaminate(base, {1.0, 3}), InvalidContaminationError);
    }
    SUBCASE("mean identity") {
        for (const auto& [alpha, L] : {std::pair{0.2, 20L}, {0.5, 25L}, {-0.05, 8L}}) {
            const Pmf q = contaminate(base, {alpha, L});
            CHECK(std::fabs(q.mean() - ((1.0 - alpha) * 7.0 + alpha * L)) < 1e-9);
        }
    }
}

TEST_CASE("contaminated growth rate tau_m") {
    CHECK(tau_m_contaminated(7.0, 0.3, {0.0, 0}) == doctest::Approx(2.1));
    CHECK(tau_m_contaminated(7.0, 0.3, {0.5, 25}) == doctest::Approx(4.8));
    CHECK(tau_m_contaminated(7.0, 0.3, {0.5, 0}) == doctest::Approx(1.05));
}
