#include "qrgg/model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qrgg/errors.hpp"
#include "qrgg/graph.hpp"
#include "oracles.hpp"

namespace qrgg {
namespace {

using testing::distance_cdf_oracle;
using testing::pair_probability_oracle;

const ConnectionModel kFig3 = ConnectionModel::fixed(0.1, 0.2, 0.5);

TEST(SamplePoints, EmptyRequest) {
  RandomStream rng(3);
  EXPECT_TRUE(sample_points(0, rng).empty());
}

TEST(SamplePoints, DeterministicUnderSeed) {
  RandomStream a(42), b(42);
  EXPECT_EQ(sample_points(5, a), sample_points(5, b));
}

TEST(SamplePoints, MomentsOfUniformCoordinates) {
  RandomStream rng(11);
  const auto points = sample_points(1000000, rng);
  double sum = 0.0, sq = 0.0;
  for (const Point& p : points) {
    ASSERT_GE(p.x, 0.0);
    ASSERT_LE(p.x, 1.0);
    ASSERT_GE(p.y, 0.0);
    ASSERT_LE(p.y, 1.0);
    sum += p.x;
    sq += p.x * p.x;
  }
  const double mean = sum / points.size();
  const double var = sq / points.size() - mean * mean;
  EXPECT_NEAR(mean, 0.5, 0.002);
  EXPECT_NEAR(var, 1.0 / 12.0, 0.001);
}

TEST(ConnectionModel, RejectsInvalidParameters) {
  EXPECT_THROW(ConnectionModel::fixed(0.1, 1.5, 1.0), Error);
  EXPECT_THROW(ConnectionModel::fixed(0.3, 0.2, 0.5), Error);
  EXPECT_THROW(ConnectionModel::fixed(-0.1, 0.2, 0.5), Error);
  EXPECT_THROW(ConnectionModel::fixed(0.1, 0.2, 1.5), Error);
  EXPECT_THROW(ConnectionModel::linear_decay(0.2, 0.2, 0.5), Error);
  EXPECT_NO_THROW(ConnectionModel::fixed(0.2, 0.2, 0.5));
  EXPECT_NO_THROW(ConnectionModel::fixed(0.0, 0.0, 0.0));
}

TEST(ConnectionModel, JsonRoundTrip) {
  for (const auto& m : {kFig3, ConnectionModel::linear_decay(0.05, 0.3, 0.9)}) {
    EXPECT_EQ(model_from_json(to_json(m)), m);
  }
  const auto j = to_json(ConnectionModel::linear_decay(0.1, 0.18, 0.9));
  EXPECT_EQ(j.at("kernel"), "linear_decay");
  EXPECT_THROW(model_from_json({{"r", 0.1}}), Error);
}

TEST(KernelProbability, LinearDecayAtInnerRadius) {
  EXPECT_DOUBLE_EQ(kernel_probability(0.1, ConnectionModel::linear_decay(0.1, 0.2, 0.9)), 0.9);
}

TEST(KernelProbability, LinearDecayVanishesAtOuterRadius) {
  EXPECT_DOUBLE_EQ(kernel_probability(0.2, ConnectionModel::linear_decay(0.1, 0.2, 0.7)), 0.0);
}

TEST(KernelProbability, LinearDecayMidpointOfSquaredRange) {
  const auto m = ConnectionModel::linear_decay(0.1, 0.2, 1.0);
  EXPECT_NEAR(kernel_probability(std::sqrt(0.025), m), 1.0 - std::sqrt(0.5), 1e-12);
}

TEST(KernelProbability, FixedAnnulus) {
  EXPECT_DOUBLE_EQ(kernel_probability(0.15, kFig3), 0.5);
}

TEST(KernelProbability, ExactOutsideAnnulusAndMonotone) {
  RandomStream rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const double r = 0.4 * rng.uniform();
    const double rp = r + 0.01 + (1.0 - r - 0.01) * rng.uniform();
    const double p = rng.uniform();
    for (const auto& m : {ConnectionModel::fixed(r, rp, p),
                          ConnectionModel::linear_decay(r, rp, p)}) {
      EXPECT_EQ(kernel_probability(r * 0.999 * rng.uniform(), m), 1.0);
      EXPECT_EQ(kernel_probability(rp + 1e-9 + rng.uniform(), m), 0.0);
      double prev = 1.0;
      for (double d = 0.0; d <= 1.5; d += 0.001) {
        const double k = kernel_probability(d, m);
        ASSERT_LE(k, prev);
        prev = k;
      }
    }
  }
}

TEST(ConnectDecision, DeterministicCasesUseNoDraws) {
  RandomStream rng(1), reference(1);
  const auto m = ConnectionModel::fixed(0.1, 0.2, 0.5);
  EXPECT_TRUE(connect_decision({0, 0}, {0, 0.05}, m, rng));
  EXPECT_FALSE(connect_decision({0, 0}, {0.9, 0.9}, m, rng));
  EXPECT_EQ(rng.next_u64(), reference.next_u64());
}

TEST(ConnectDecision, AnnulusUsesExactlyOneDraw) {
  RandomStream rng(1), reference(1);
  connect_decision({0, 0}, {0, 0.15}, kFig3, rng);
  reference.next_u64();
  EXPECT_EQ(rng.next_u64(), reference.next_u64());
}

TEST(ConnectDecision, AnnulusFrequency) {
  RandomStream rng(8);
  int accepted = 0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    accepted += connect_decision({0, 0}, {0, 0.15}, kFig3, rng) ? 1 : 0;
  }
  EXPECT_NEAR(static_cast<double>(accepted) / kDraws, 0.5, 0.01);
}

TEST(PPrimeBounds, DirectEvaluation) {
  const auto b = p_prime_bounds(kFig3);
  EXPECT_NEAR(b.lower, 0.0196350, 1e-7);
  EXPECT_NEAR(b.upper, 0.0785398, 1e-7);
}

TEST(PPrimeBounds, EmptyAnnulusReducesToDisk) {
  const auto b = p_prime_bounds(ConnectionModel::fixed(0.1, 0.1, 0.3));
  EXPECT_NEAR(b.lower, 0.00785398, 1e-8);
  EXPECT_NEAR(b.upper, 0.0314159, 1e-7);
}

TEST(PPrimeBounds, ZeroRadius) {
  const auto b = p_prime_bounds(ConnectionModel::fixed(0.0, 0.0, 0.7));
  EXPECT_EQ(b.lower, 0.0);
  EXPECT_EQ(b.upper, 0.0);
}

TEST(PPrimeBounds, ClampsToOne) {
  EXPECT_EQ(p_prime_bounds(ConnectionModel::fixed(1.0, 1.0, 1.0)).upper, 1.0);
}

TEST(PPrimeBounds, LinearDecayNeedsOverride) {
  const auto m = ConnectionModel::linear_decay(0.1, 0.2, 0.9);
  try {
    p_prime_bounds(m);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedKernel);
  }
  const auto b = p_prime_bounds(m, effective_annulus_probability(m));
  EXPECT_NEAR(b.upper, std::numbers::pi * (0.01 + 0.03 * 0.3), 1e-12);
}

TEST(EffectiveAnnulusProbability, DecayAveragesToOneThird) {
  // Area-weighted average of the decay factor, integrated directly in d.
  const double r = 0.1, rp = 0.25;
  constexpr int kSteps = 2000000;
  const double h = (rp - r) / kSteps;
  double acc = 0.0;
  for (int i = 0; i < kSteps; ++i) {
    const double d = r + (i + 0.5) * h;
    acc += (1.0 - std::sqrt((d * d - r * r) / (rp * rp - r * r))) * 2.0 * d;
  }
  const double mean = acc * h / (rp * rp - r * r);
  EXPECT_NEAR(mean, 1.0 / 3.0, 1e-6);
  EXPECT_DOUBLE_EQ(effective_annulus_probability(ConnectionModel::linear_decay(r, rp, 0.9)), 0.3);
  EXPECT_DOUBLE_EQ(effective_annulus_probability(kFig3), 0.5);
}

TEST(SquareDistanceCdf, MatchesIndependentIntegration) {
  for (double rho : {0.0, 0.05, 0.1, 0.2, 0.5, 0.8, 1.0}) {
    EXPECT_NEAR(square_distance_cdf(rho), distance_cdf_oracle(rho), 1e-10) << rho;
  }
}

TEST(ConnectionProbability, FixedKernelOracleValue) {
  EXPECT_NEAR(distance_cdf_oracle(0.1), 0.0287993, 1e-7);
  EXPECT_NEAR(distance_cdf_oracle(0.2) - distance_cdf_oracle(0.1), 0.0763311, 1e-7);
  EXPECT_NEAR(connection_probability(kFig3), 0.0669648, 1e-7);
}

TEST(ConnectionProbability, DecayKernelMatchesGridOracle) {
  const auto m = ConnectionModel::linear_decay(0.1, 0.18, 0.9);
  EXPECT_NEAR(connection_probability(m), pair_probability_oracle(m), 2e-5);
  const auto m0 = ConnectionModel::linear_decay(0.0, 0.3, 1.0);
  EXPECT_NEAR(connection_probability(m0), pair_probability_oracle(m0), 2e-5);
}

TEST(EstimateConnectionProbability, Fig3AgainstOracle) {
  RandomStream rng(2024);
  const double estimate = estimate_connection_probability(kFig3, 1000000, rng);
  EXPECT_NEAR(estimate, 0.066965, 0.001);
  EXPECT_TRUE(p_prime_bounds(kFig3).contains(estimate));
}

TEST(EstimateConnectionProbability, NoConnectivity) {
  RandomStream rng(1);
  EXPECT_EQ(estimate_connection_probability(ConnectionModel::fixed(0.0, 0.0, 0.0), 1000, rng), 0.0);
  EXPECT_THROW(estimate_connection_probability(kFig3, 0, rng), Error);
}

TEST(EstimateConnectionProbability, ParallelMatchesSerialReference) {
  for (std::size_t samples : {1ul, 1000ul, kPairBlock + 17, 5 * kPairBlock}) {
    RandomStream a(77), b(77);
    const double reference = serial::estimate_connection_probability(kFig3, samples, a);
    for (int jobs : {1, 2, 3, 8}) {
      EXPECT_EQ(estimate_connection_probability(kFig3, samples, b, jobs), reference);
    }
  }
}

TEST(EstimateConnectionProbability, InsideBracketForRandomFixedModels) {
  RandomStream params(99);
  for (int i = 0; i < 10; ++i) {
    const double r = 0.3 * params.uniform();
    const double rp = r + 0.3 * params.uniform();
    const auto m = ConnectionModel::fixed(r, rp, params.uniform());
    RandomStream rng = params.child("estimate", i);
    const double estimate = estimate_connection_probability(m, 200000, rng);
    EXPECT_TRUE(p_prime_bounds(m).contains(estimate)) << r << " " << rp;
    EXPECT_NEAR(estimate, connection_probability(m), 0.003);
  }
}

TEST(EdgeDependence, IncidentEdgesUncorrelated) {
  // Border effects couple the two edges through the source position; at
  // these radii the induced correlation is about 0.003.
  const auto m = kFig3;
  const RandomStream root(4);
  constexpr int kDraws = 10000;
  double sa = 0, sb = 0, sab = 0;
  for (int i = 0; i < kDraws; ++i) {
    const auto g = build_connectivity_graph(3, 1, m, root.child("draw", i));
    const double a = g.connected(0, 1) ? 1 : 0;
    const double b = g.connected(0, 2) ? 1 : 0;
    sa += a;
    sb += b;
    sab += a * b;
  }
  const double ma = sa / kDraws, mb = sb / kDraws;
  const double cov = sab / kDraws - ma * mb;
  const double corr = cov / std::sqrt(ma * (1 - ma) * mb * (1 - mb));
  EXPECT_NEAR(corr, 0.0, 0.03);
}

TEST(EdgeDependence, TrianglesAreNotIndependent) {
  const auto m = ConnectionModel::fixed(0.2, 0.3, 1.0);
  const RandomStream root(5);
  int vw = 0, both = 0, closed = 0;
  constexpr int kDraws = 10000;
  for (int i = 0; i < kDraws; ++i) {
    const auto g = build_connectivity_graph(3, 1, m, root.child("draw", i));
    const bool uv = g.connected(1, 2), uw = g.connected(1, 3), e = g.connected(2, 3);
    vw += e ? 1 : 0;
    if (uv && uw) {
      ++both;
      closed += e ? 1 : 0;
    }
  }
  ASSERT_GT(both, 100);
  EXPECT_GT(static_cast<double>(closed) / both, static_cast<double>(vw) / kDraws);
}

}  // namespace
}  // namespace qrgg
