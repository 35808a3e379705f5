#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "tabla/ode.hpp"
#include "tabla/specfun.hpp"

using namespace tabla;

namespace {

struct UnitDensity {
    double density(double) const { return 1.0; }
    double radius() const { return 1.0; }
};

struct PoisonedDensity {
    double density(double r) const { return r > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0; }
    double radius() const { return 1.0; }
};

RadialState bessel_start(int m, double k, double r0) {
    return {r0, bessel_j(m, k * r0), k * bessel_j_prime(m, k * r0)};
}

double rim_error(int m, double k, double h, RkScheme scheme) {
    const auto t = integrate(m, k, UnitDensity{}, 1e-4, h, bessel_start(m, k, 1e-4), scheme);
    return std::abs(t.states.back().R - bessel_j(m, k));
}

}  // namespace

TEST(RadialRhs, DirectSubstitution) {
    const auto d = radial_rhs(0, 1.0, UnitDensity{}, {1.0, 1.0, 0.0});
    EXPECT_EQ(d.dR, 0.0);
    EXPECT_EQ(d.d2R, -1.0);
    for (double k : {0.5, 3.0, 17.0}) {
        const auto e = radial_rhs(1, k, UnitDensity{}, {1.0, 0.0, 1.0});
        EXPECT_EQ(e.dR, 1.0);
        EXPECT_EQ(e.d2R, -1.0);
    }
}

TEST(RadialRhs, SingularAtOrigin) {
    EXPECT_THROW(radial_rhs(0, 1.0, UnitDensity{}, {0.0, 1.0, 0.0}), std::domain_error);
}

TEST(Integrate, ReproducesBesselAlongTheSpan) {
    for (int m : {0, 1}) {
        const double k = 7.3;
        const auto t = integrate(m, k, UnitDensity{}, 1e-4, 1e-4, bessel_start(m, k, 1e-4));
        double worst = 0.0;
        for (std::size_t i = 0; i < t.states.size(); i += 37)
            worst = std::max(worst, std::abs(t.states[i].R - bessel_j(m, k * t.states[i].r)));
        worst = std::max(worst, std::abs(t.states.back().R - bessel_j(m, k)));
        EXPECT_LT(worst, 1e-6) << "m=" << m;
    }
}

TEST(Integrate, HigherOrdersReproduceBesselShape) {
    // For m >= 2 the first steps scale the amplitude; the shape must still match.
    for (int m : {2, 4}) {
        const double k = 9.0;
        const auto t = integrate(m, k, UnitDensity{}, 1e-4, 1e-4, bessel_start(m, k, 1e-4));
        const double scale = t.states.back().R / bessel_j(m, k);
        for (std::size_t i = 2000; i < t.states.size(); i += 500)
            EXPECT_NEAR(t.states[i].R / scale, bessel_j(m, k * t.states[i].r), 1e-5) << "m=" << m;
    }
}

TEST(Integrate, FirstZeroSitsAtTheRim) {
    const double k = 2.404826;
    const auto t = integrate(0, k, UnitDensity{}, 1e-4, 1e-4, bessel_start(0, k, 1e-4));
    EXPECT_LT(std::abs(t.states.back().R), 1e-4);
    const auto u = integrate(0, 1.0, UnitDensity{}, 1e-4, 1e-4, bessel_start(0, 1.0, 1e-4));
    EXPECT_NEAR(u.states.back().R, 0.7652, 1e-3);
}

TEST(Integrate, TrajectoryShape) {
    const auto t = integrate(0, 3.0, UnitDensity{}, 1e-4, 1e-3, bessel_start(0, 3.0, 1e-4));
    EXPECT_EQ(t.states.front().r, 1e-4);
    EXPECT_EQ(t.states.back().r, 1.0);
    EXPECT_EQ(t.states.size(), 1001u);
    EXPECT_NEAR(t.h, 1e-3, 0.5e-3);
    for (std::size_t i = 1; i < t.states.size(); ++i) EXPECT_GT(t.states[i].r, t.states[i - 1].r);
}

TEST(Integrate, MidpointIsSecondOrder) {
    const double k = 5.0;
    const double e1 = rim_error(0, k, 1e-3, RkScheme::Midpoint);
    const double e2 = rim_error(0, k, 5e-4, RkScheme::Midpoint);
    EXPECT_NEAR(e1 / e2, 4.0, 0.8);
    const double order = std::log2(e1 / e2);
    EXPECT_GE(order, 1.8);
    EXPECT_LE(order, 2.2);
}

TEST(Integrate, ClassicFourthOrder) {
    const double k = 5.0;
    const double e1 = rim_error(0, k, 9e-3, RkScheme::Classic4);
    const double e2 = rim_error(0, k, 4.5e-3, RkScheme::Classic4);
    const double order = std::log2(e1 / e2);
    EXPECT_GE(order, 3.8);
    EXPECT_LE(order, 4.2);
}

TEST(Integrate, LinearInInitialData) {
    const auto init = bessel_start(3, 6.0, 1e-4);
    const auto a = integrate(3, 6.0, UnitDensity{}, 1e-4, 1e-3, init);
    for (double s : {0.5, 4.0, 1024.0}) {
        const auto b = integrate(3, 6.0, UnitDensity{}, 1e-4, 1e-3, RadialState{init.r, s * init.R, s * init.dR});
        for (std::size_t i = 0; i < a.states.size(); ++i) {
            EXPECT_DOUBLE_EQ(b.states[i].R, s * a.states[i].R);
            EXPECT_DOUBLE_EQ(b.states[i].dR, s * a.states[i].dR);
        }
        EXPECT_EQ(count_nodes(a), count_nodes(b));
    }
}

TEST(Integrate, RejectsBadSteps) {
    const auto init = bessel_start(0, 1.0, 1e-4);
    EXPECT_THROW(integrate(0, 1.0, UnitDensity{}, 1e-4, 0.02, init), std::invalid_argument);
    EXPECT_THROW(integrate(0, 1.0, UnitDensity{}, 1e-4, 0.0, init), std::invalid_argument);
    EXPECT_THROW(integrate(0, 1.0, UnitDensity{}, 0.0, 1e-3, init), std::invalid_argument);
    EXPECT_THROW(integrate(0, 1.0, UnitDensity{}, 1.0, 1e-3, init), std::invalid_argument);
}

TEST(Integrate, NonFiniteStateAborts) {
    try {
        integrate(0, 2.0, PoisonedDensity{}, 1e-4, 1e-3, bessel_start(0, 2.0, 1e-4));
        FAIL() << "expected IntegrationError";
    } catch (const IntegrationError& e) {
        EXPECT_GT(e.step(), 400u);
        EXPECT_LT(e.step(), 600u);
        EXPECT_EQ(e.kprime(), 2.0);
    }
}

TEST(CountNodes, ZerosOfJ0AndJ1) {
    auto nodes_at = [](int m, double k) {
        return count_nodes(integrate(m, k, UnitDensity{}, 1e-4, 1e-4, bessel_start(m, k, 1e-4)));
    };
    EXPECT_EQ(nodes_at(0, bessel_zero(0, 1)), 0);
    EXPECT_EQ(nodes_at(0, bessel_zero(0, 2)), 1);
    EXPECT_EQ(nodes_at(1, bessel_zero(1, 3)), 2);
    // Just past a root the new crossing sits inside the 2h rim band.
    EXPECT_EQ(nodes_at(0, bessel_zero(0, 2) + 1e-6), 1);
    EXPECT_EQ(nodes_at(0, bessel_zero(0, 2) - 1e-6), 1);
}

TEST(Shoot, AgreesWithRecordedTrajectory) {
    const auto init = bessel_start(2, 8.0, 1e-4);
    const auto t = integrate(2, 8.0, UnitDensity{}, 1e-4, 1e-4, init);
    const auto s = shoot(2, 8.0, UnitDensity{}, 1e-4, 1e-4, init);
    EXPECT_EQ(s.rim.R, t.states.back().R);
    EXPECT_EQ(s.rim.dR, t.states.back().dR);
    EXPECT_EQ(s.interior_nodes, count_nodes(t));
}
