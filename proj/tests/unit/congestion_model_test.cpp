#include <cmath>

#include <gtest/gtest.h>

#include "congest/congestion_model.hpp"
#include "frozen_values.hpp"
#include "generators.hpp"

namespace congest {
namespace {

using testing::Gen;
using testing::rel_diff;

const CongestionModel kSocial(1.5, 1.0, 0.0, CongestionMode::kSocialCost);
const CongestionModel kEquilibrium(1.5, 1.0, 0.0, CongestionMode::kEquilibrium);

TEST(CongestionModel, Construction) {
  EXPECT_ERROR_KIND(CongestionModel(1.0, 1.0, 0.0, CongestionMode::kEquilibrium),
                    ErrorKind::kInvalidArgument);
  EXPECT_ERROR_KIND(CongestionModel(1.5, 0.0, 0.0, CongestionMode::kEquilibrium),
                    ErrorKind::kInvalidArgument);
  EXPECT_ERROR_KIND(CongestionModel(1.5, 1.0, -0.1, CongestionMode::kEquilibrium),
                    ErrorKind::kInvalidArgument);
  EXPECT_DOUBLE_EQ(kSocial.conjugate_exponent(), 3.0);
  EXPECT_FALSE(kSocial.outside_continuum_theory());
  EXPECT_TRUE(CongestionModel(2.0, 1.0, 0.0, CongestionMode::kSocialCost)
                  .outside_continuum_theory());
  EXPECT_EQ(parse_congestion_mode("social_cost"), CongestionMode::kSocialCost);
  EXPECT_EQ(parse_congestion_mode("equilibrium"), CongestionMode::kEquilibrium);
  EXPECT_ERROR_KIND(parse_congestion_mode("nash"), ErrorKind::kInvalidArgument);
}

TEST(HEval, Examples) {
  EXPECT_NEAR(kSocial.h(4.0), 8.0, 1e-14);
  EXPECT_NEAR(kEquilibrium.h(4.0), 16.0 / 3.0, 1e-14);
  EXPECT_EQ(kSocial.h(0.0), 0.0);
  EXPECT_EQ(kEquilibrium.h(0.0), 0.0);
  EXPECT_ERROR_KIND(kSocial.h(-1.0), ErrorKind::kNegativeDensity);
}

TEST(HPrime, Examples) {
  EXPECT_NEAR(kEquilibrium.h_prime(0.25), 0.5, 1e-15);
  EXPECT_NEAR(kSocial.h_prime(1.0), 1.5, 1e-15);
  for (auto mode : {CongestionMode::kSocialCost, CongestionMode::kEquilibrium}) {
    EXPECT_DOUBLE_EQ(CongestionModel(1.5, 1.0, 0.1, mode).h_prime(0.0), 0.1);
  }
  EXPECT_ERROR_KIND(kSocial.h_prime(-1e-3), ErrorKind::kNegativeDensity);
}

TEST(HConj, Examples) {
  EXPECT_NEAR(kEquilibrium.h_conj(1.0), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(kEquilibrium.h_conj(0.0), 0.0);
  EXPECT_NEAR(kEquilibrium.h(1.0) + kEquilibrium.h_conj(kEquilibrium.h_prime(1.0)), 1.0,
              1e-15);
  EXPECT_ERROR_KIND(kEquilibrium.h_conj(-1.0), ErrorKind::kNegativeMetric);
}

TEST(HConj, MatchesGridMaximisation) {
  constexpr std::size_t n = std::size(frozen::kConjValues);
  for (std::size_t k = 0; k < n; ++k) {
    const double* c = &frozen::kConjCases[5 * k];
    const CongestionModel m(c[0], c[1], c[2],
                            c[3] == 1.0 ? CongestionMode::kSocialCost
                                        : CongestionMode::kEquilibrium);
    EXPECT_NEAR(m.h_conj(c[4]), frozen::kConjValues[k],
                1e-10 * std::max(1.0, frozen::kConjValues[k]))
        << "case " << k;
  }
}

TEST(GrowthBounds, HoldOnSamples) {
  Gen gen(31);
  for (int trial = 0; trial < 200; ++trial) {
    const CongestionModel m(gen.uniform(1.05, 3.0), gen.uniform(0.1, 3.0),
                            gen.uniform(0.0, 1.0),
                            gen.coin() ? CongestionMode::kSocialCost
                                       : CongestionMode::kEquilibrium);
    const GrowthBounds gb = m.g_bounds();
    const GrowthBounds hb = m.h_bounds();
    for (int s = 0; s < 20; ++s) {
      const double z = std::exp(gen.uniform(-6.0, 6.0));
      const double zq1 = std::pow(z, m.q() - 1.0);
      const double zq = std::pow(z, m.q());
      EXPECT_LE(gb.lower * zq1, m.g(z) * (1 + 1e-12));
      EXPECT_LE(m.g(z), gb.upper * (zq1 + 1.0) * (1 + 1e-12));
      EXPECT_LE(hb.lower * zq, m.h(z) * (1 + 1e-12));
      EXPECT_LE(m.h(z), hb.upper * (zq + 1.0) * (1 + 1e-12));
    }
  }
}

TEST(ModelProperty, YoungInequalityWithEqualityOnTheGraph) {
  Gen gen(32);
  for (int trial = 0; trial < 500; ++trial) {
    const CongestionModel m(gen.uniform(1.05, 3.0), gen.uniform(0.1, 3.0),
                            gen.uniform(0.0, 0.5),
                            gen.coin() ? CongestionMode::kSocialCost
                                       : CongestionMode::kEquilibrium);
    const double z = gen.uniform(0.0, 10.0);
    const double xi = gen.uniform(0.0, 10.0);
    EXPECT_LE(xi * z, m.h(z) + m.h_conj(xi) + 1e-10 * (1.0 + xi * z));
    const double on = m.h_prime(z);
    EXPECT_NEAR(on * z, m.h(z) + m.h_conj(on), 1e-8 * std::max(1.0, on * z));
  }
}

TEST(ModelProperty, DerivativeMatchesFiniteDifferences) {
  Gen gen(33);
  for (int trial = 0; trial < 300; ++trial) {
    const CongestionModel m(gen.uniform(1.05, 3.0), gen.uniform(0.1, 3.0),
                            gen.uniform(0.0, 0.5),
                            gen.coin() ? CongestionMode::kSocialCost
                                       : CongestionMode::kEquilibrium);
    const double z = std::exp(gen.uniform(std::log(0.01), std::log(100.0)));
    const double step = 1e-5 * z;
    const double fd = (m.h(z + step) - m.h(z - step)) / (2 * step);
    EXPECT_LT(rel_diff(fd, m.h_prime(z)), 1e-6);
  }
}

TEST(ModelProperty, MonotoneAndConvex) {
  Gen gen(34);
  for (int trial = 0; trial < 100; ++trial) {
    const CongestionModel m(gen.uniform(1.05, 3.0), gen.uniform(0.1, 3.0),
                            gen.uniform(0.0, 0.5),
                            gen.coin() ? CongestionMode::kSocialCost
                                       : CongestionMode::kEquilibrium);
    double prev_h = 0.0;
    double prev_d = m.h_prime(0.0);
    for (int k = 1; k <= 200; ++k) {
      const double z = 0.05 * k;
      EXPECT_GE(m.h(z), prev_h);
      EXPECT_GE(m.h_prime(z), prev_d);
      EXPECT_GE(m.g(z), 0.0);
      prev_h = m.h(z);
      prev_d = m.h_prime(z);
    }
  }
}

TEST(ModelProperty, DensityForMetricInvertsDerivative) {
  Gen gen(35);
  for (int trial = 0; trial < 300; ++trial) {
    const CongestionModel m(gen.uniform(1.05, 3.0), gen.uniform(0.1, 3.0),
                            gen.uniform(0.0, 0.5), CongestionMode::kEquilibrium);
    const double z = gen.uniform(0.0, 10.0);
    EXPECT_NEAR(m.density_for_metric(m.h_prime(z)), z, 1e-8 * std::max(1.0, z));
    EXPECT_EQ(m.density_for_metric(m.c0() * 0.5), 0.0);
  }
}

}  // namespace
}  // namespace congest
