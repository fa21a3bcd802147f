#include "doctest.h"

#include <cmath>
#include <string_view>

#include "cbpmde/errors.hpp"
#include "cbpmde/family.hpp"
#include "cbpmde/tree.hpp"

using namespace cbpmde;

namespace {

// test-only degenerate offspring law: every individual has exactly k0 children
class PointMassFamily : public OffspringFamily {
public:
    explicit PointMassFamily(std::size_t k0) : k0_(k0) {}
    std::string_view name() const override { return "point_mass"; }
    double theta_lo() const override { return 0.1; }
    double theta_hi() const override { return 30.0; }
    Pmf pmf_at(double, std::size_t K) const override {
        std::vector<double> p(std::max(K, k0_) + 1, 0.0);
        p[k0_] = 1.0;
        return Pmf(std::move(p));
    }
    double mass_at(double, std::size_t k) const override { return k == k0_ ? 1.0 : 0.0; }
    double deriv_at(double, std::size_t) const override { return 0.0; }
    double second_deriv_at(double, std::size_t) const override { return 0.0; }
    std::size_t support_bound(double) const override { return k0_; }

private:
    std::size_t k0_;
};

const PoissonFamily poisson;
const ControlSpec kPoissonControl{ControlLaw::poisson_rate, 0.3};

}  // namespace

TEST_CASE("deterministic doubling") {
    const PointMassFamily two(2);
    const ControlSpec full{ControlLaw::deterministic, 1.0};
    const FamilyTree tree = simulate(two, 1.0, full, 1, 5, 42);
    REQUIRE(tree.z.size() == 6);
    std::int64_t expect = 1;
    for (std::size_t l = 0; l < 6; ++l) {
        CHECK(tree.z[l] == expect);
        expect *= 2;
    }
    CHECK(tree.is_valid());

    const TreeTotals t = totals(tree);
    CHECK(t.delta == 1 + 2 + 4 + 8 + 16);
    CHECK(t.y[2] == t.delta);
}

TEST_CASE("no progenitors means an empty next generation") {
    const PointMassFamily two(2);
    const ControlSpec none{ControlLaw::deterministic, 0.0};
    const FamilyTree tree = simulate(two, 1.0, none, 7, 3, 0);
    CHECK(tree.z[0] == 7);
    CHECK(tree.z[1] == 0);
    CHECK(tree.z[3] == 0);
    CHECK(totals(tree).delta == 0);
}

TEST_CASE("degenerate start") {
    const FamilyTree tree = simulate(poisson, 7.0, kPoissonControl, 0, 4, 9);
    for (const std::int64_t z : tree.z) CHECK(z == 0);
    const TreeTotals t = totals(tree);
    CHECK(t.delta == 0);
    for (const std::int64_t y : t.y) CHECK(y == 0);
}

TEST_CASE("totals of a single generation") {
    FamilyTree tree;
    tree.z = {2, 4};
    tree.phi = {2};
    tree.counts = {{0, 1, 0, 1}};  // one progenitor with 1 child, one with 3
    REQUIRE(tree.is_valid());
    const TreeTotals t = totals(tree);
    CHECK(t.delta == 2);
    CHECK(t.y[1] == 1);
    CHECK(t.y[3] == 1);
}

TEST_CASE("bookkeeping identities hold across seeded runs") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const FamilyTree tree = simulate(poisson, 7.0, kPoissonControl, 1, 6, seed);
        CHECK(tree.is_valid());
        const TreeTotals t = totals(tree);
        std::int64_t y_total = 0;
        for (const std::int64_t y : t.y) y_total += y;
        CHECK(y_total == t.delta);
    }
}

TEST_CASE("identical seeds reproduce identical trees") {
    const FamilyTree a = simulate(poisson, 7.0, kPoissonControl, 1, 10, 314159);
    const FamilyTree b = simulate(poisson, 7.0, kPoissonControl, 1, 10, 314159);
    CHECK(a.z == b.z);
    CHECK(a.phi == b.phi);
    CHECK(a.counts == b.counts);
    // neighboring seeds decorrelate; start large so extinction cannot mask it
    const FamilyTree big_a = simulate(poisson, 7.0, kPoissonControl, 50, 4, 314159);
    const FamilyTree big_c = simulate(poisson, 7.0, kPoissonControl, 50, 4, 314160);
    CHECK(big_a.z != big_c.z);
}

TEST_CASE("mean of Z_1 matches theta * lambda * z0") {
    // Monte Carlo oracle; E[Z_1] = 2.1, Var(Z_1) = lambda*theta + theta^2*lambda
    const int n = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (int seed = 0; seed < n; ++seed) {
        const FamilyTree tree = simulate(poisson, 7.0, kPoissonControl, 1, 1, 70000 + seed);
        const double z1 = static_cast<double>(tree.z[1]);
        sum += z1;
        sumsq += z1 * z1;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    const double se = std::sqrt(var / n);
    CHECK(std::fabs(mean - 2.1) < 3.0 * se);
}

TEST_CASE("supercritical growth stabilizes among survivors") {
    // Z_n / tau_m^n should approach a fixed random variable: the empirical
    // coefficient of variation at n = 10 stays near the n = 8 one
    const double tau_m = 2.1;
    std::vector<double> w8, w10;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
        const FamilyTree tree = simulate(poisson, 7.0, kPoissonControl, 1, 10, seed);
        if (tree.z.back() == 0) continue;
        w8.push_back(tree.z[8] / std::pow(tau_m, 8.0));
        w10.push_back(tree.z[10] / std::pow(tau_m, 10.0));
    }
    REQUIRE(w10.size() > 100);
    const auto cv = [](const std::vector<double>& v) {
        double m = 0.0;
        for (const double x : v) m += x;
        m /= static_cast<double>(v.size());
        double s = 0.0;
        for (const double x : v) s += (x - m) * (x - m);
        return std::sqrt(s / static_cast<double>(v.size())) / m;
    };
    CHECK(w10.size() > 0.1 * 2000);  // survival stays strictly positive
    CHECK(std::fabs(cv(w10) - cv(w8)) < 0.2 * cv(w8));
}

TEST_CASE("observation horizons") {
    CHECK(generations_for_rate(4.8) == 8);
    CHECK(generations_for_rate(1.05) == 65);
    const int mid = generations_for_rate(2.1);
    CHECK(mid >= 8);
    CHECK(mid <= 65);

    // nonincreasing across the full contamination grid
    int prev = 1000;
    for (double tau = 1.05; tau <= 4.81; tau += 0.01) {
        const int n = generations_for_rate(tau);
        CHECK(n <= prev);
        prev = n;
    }
    CHECK_THROWS_AS(generations_for_rate(1.0), SubcriticalScheduleError);
    CHECK_THROWS_AS(generations_for_rate(0.4), SubcriticalScheduleError);
}
