#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "tabla/specfun.hpp"

using namespace tabla;

TEST(BesselSeries, ValuesAtOrigin) {
    EXPECT_EQ(bessel_series(0, 0.0, 4), 1.0);
    EXPECT_EQ(bessel_series(1, 0.0, 4), 0.0);
    EXPECT_EQ(bessel_series(5, 0.0, 4), 0.0);
}

TEST(BesselSeries, FourTermsMatchLongSeriesAtSmallArgument) {
    EXPECT_NEAR(bessel_series(2, 1e-4, 4), bessel_series(2, 1e-4, 40), 1e-15);
    for (int m = 0; m <= 6; ++m) EXPECT_NEAR(bessel_series(m, 1e-4, 4), bessel_j(m, 1e-4), 1e-14) << "m=" << m;
}

TEST(BesselSeries, TruncationErrorBelowRelativeBoundForSmallX) {
    for (int m = 0; m <= 10; ++m) {
        for (double x : {1e-4, 1e-3, 5e-3, 1e-2}) {
            const double full = bessel_series(m, x, 60);
            const double four = bessel_series(m, x, 4);
            EXPECT_LE(std::abs(four - full), 1e-12 * std::abs(full)) << "m=" << m << " x=" << x;
        }
    }
}

TEST(BesselSeries, RejectsBadArguments) {
    EXPECT_THROW(bessel_series(0, -1.0, 4), std::domain_error);
    EXPECT_THROW(bessel_series(61, 1.0, 4), std::domain_error);
    EXPECT_THROW(bessel_series(-1, 1.0, 4), std::domain_error);
    EXPECT_THROW(bessel_series(0, 1.0, 0), std::domain_error);
    EXPECT_THROW(bessel_j(0, -0.5), std::domain_error);
    EXPECT_NO_THROW(bessel_series(60, 1.0, 4));
}

TEST(BesselJ, OriginValuesAndDerivatives) {
    EXPECT_EQ(bessel_j(0, 0.0), 1.0);
    EXPECT_EQ(bessel_j(1, 0.0), 0.0);
    EXPECT_EQ(bessel_j_prime(0, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(bessel_j_prime(1, 0.0), 0.5);
    for (int m = 2; m <= 10; ++m) EXPECT_EQ(bessel_j_prime(m, 0.0), 0.0);
}

TEST(BesselJ, NearFirstZeroOfJ0) { EXPECT_LT(std::abs(bessel_j(0, 2.404826)), 1e-6); }

TEST(BesselJ, KnownValues) {
    // Reference values from an independent double-precision implementation (SciPy jv).
    EXPECT_NEAR(bessel_j(0, 1.0), 0.7651976865579666, 1e-15);
    EXPECT_NEAR(bessel_j(1, 1.0), 0.4400505857449335, 1e-15);
    EXPECT_NEAR(bessel_j(0, 10.0), -0.2459357644513483, 1e-14);
    EXPECT_NEAR(bessel_j(5, 20.0), 0.15116976798239493, 1e-13);
}

TEST(BesselJ, DerivativeMatchesCentralDifference) {
    const double h = 1e-6;
    const double fd = (bessel_j(0, 1.0 + h) - bessel_j(0, 1.0 - h)) / (2 * h);
    EXPECT_NEAR(bessel_j_prime(0, 1.0), fd, 1e-8);
    for (int m = 1; m <= 6; ++m) {
        for (double x : {0.5, 3.0, 12.0}) {
            const double d = (bessel_j(m, x + h) - bessel_j(m, x - h)) / (2 * h);
            EXPECT_NEAR(bessel_j_prime(m, x), d, 1e-8) << "m=" << m << " x=" << x;
        }
    }
}

TEST(BesselJ, BoundedByOne) {
    for (int m = 0; m <= 10; ++m)
        for (int i = 0; i <= 500; ++i) EXPECT_LE(std::abs(bessel_j(m, 0.1 * i)), 1.0) << "m=" << m;
}

TEST(BesselZero, FirstZeros) {
    EXPECT_NEAR(bessel_zero(0, 1), 2.404826, 1e-6);
    // DLMF 10.21(i) tabulated zeros.
    EXPECT_NEAR(bessel_zero(0, 2), 5.5200781103, 1e-9);
    EXPECT_NEAR(bessel_zero(1, 1), 3.8317059702, 1e-9);
    EXPECT_NEAR(bessel_zero(2, 3), 11.6198411721, 1e-9);
    EXPECT_NEAR(bessel_zero(4, 2), 11.0647094885, 1e-9);
}

TEST(BesselZero, RatiosOfTheBareMembrane) {
    const double base = bessel_zero(0, 1);
    EXPECT_NEAR(bessel_zero(0, 2) / base, 2.295, 1e-3);
    EXPECT_NEAR(bessel_zero(1, 1) / base, 1.593, 1e-3);
    EXPECT_NEAR(bessel_zero(1, 1) / base, 1.59, 0.005);
}

TEST(BesselZero, InterlacingAndSmallResidual) {
    for (int m = 0; m <= 10; ++m) {
        for (int k = 1; k <= 10; ++k) {
            const double z = bessel_zero(m, k);
            EXPECT_LT(std::abs(bessel_j(m, z)), 1e-9) << "m=" << m << " k=" << k;
            if (m < 10) {
                EXPECT_LT(z, bessel_zero(m + 1, k));
                if (k < 10) {
                    EXPECT_LT(bessel_zero(m + 1, k), bessel_zero(m, k + 1));
                }
            }
        }
    }
}

TEST(BesselZero, RejectsOutOfScope) {
    EXPECT_THROW(bessel_zero(11, 1), std::domain_error);
    EXPECT_THROW(bessel_zero(0, 0), std::domain_error);
    EXPECT_THROW(bessel_zero(0, 11), std::domain_error);
}
