#include "bsq/scenario.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bsq/error.hpp"

using namespace bsq;
using namespace bsq::scenario;

TEST(ConicalIsland, GeometryExamples) {
  const ConicalIsland isl;
  EXPECT_NEAR(isl.shoreline_radius(), 2.32, 1e-12);
  EXPECT_NEAR(conical_island_bed(isl, isl.cx + 3.6, isl.cy), 0.0, 1e-12);
  EXPECT_EQ(conical_island_bed(isl, isl.cx + 5.0, isl.cy), 0.0);
  EXPECT_EQ(conical_island_bed(isl, isl.cx, isl.cy), isl.crest_height);
  const Grid small{50, 50, 0.1, 0.1, 0, 0};
  EXPECT_THROW(conical_island_bathymetry(small, isl), InvalidInput);
  const Grid g{301, 301, 0.1, 0.1, 0, 0};
  const auto b = conical_island_bathymetry(g, isl);
  EXPECT_EQ(b.ws, 0.32);
}

TEST(Hamm, BedExamples) {
  for (double y : {-15.0, 0.0, 7.0}) EXPECT_NEAR(hamm_bed(18.0, y), 0.1, 1e-15);
  EXPECT_NEAR(hamm_bed(0.0, 15.0), -0.5, 1e-12);
  EXPECT_NEAR(hamm_bed(0.0, 0.0), 0.1 - 0.6 * (1 + 3 * std::exp(-6.0)), 1e-12);
  EXPECT_NEAR(hamm_bed(0.0, 0.0), -0.50446, 1e-5);
}

TEST(SolitaryWave, ProfileAndValidation) {
  const SolitaryWaveSpec spec{0.0576, 0.32, 5.0};
  EXPECT_DOUBLE_EQ(spec.eta(5.0), 0.0576);
  const double off = 4.5 / spec.kappa();
  EXPECT_LT(spec.eta(5.0 + off), 1e-3 * spec.H);
  EXPECT_LT(spec.eta(5.0 - off), 1e-3 * spec.H);
  EXPECT_THROW((SolitaryWaveSpec{0.3, 0.32, 0}).validate(), InvalidInput);
  EXPECT_THROW((SolitaryWaveSpec{0.1, 0.32, 0, 0}).validate(), InvalidInput);
}

TEST(SolitaryWave, InitialConditionFluxAndTail) {
  const Grid g{400, 5, 0.05, 0.05, 0, 0};
  std::vector<double> bed(g.cells(), -0.32);
  const auto b = build_bathymetry(g, bed, 0.0);
  const SolitaryWaveSpec spec{0.0576, 0.32, 10.0};
  double tail = 1.0;
  const auto s = solitary_wave_ic(spec, b, &tail);
  EXPECT_LT(tail, 1e-6);
  const int i = 199;
  const double eta = spec.eta(g.x(i));
  EXPECT_DOUBLE_EQ(s.w(i, 2), eta);
  EXPECT_NEAR(s.P(i, 2), eta * std::sqrt(9.81 * 0.32) * (1 + eta / 0.32), 1e-15);
  EXPECT_EQ(s.Q(i, 2), 0.0);
}

TEST(Gauges, NearestCellSamplingAndErrors) {
  const Grid g{10, 10, 1.0, 1.0, 0, 0};
  std::vector<double> bed(g.cells(), -1.0);
  const auto b = build_bathymetry(g, bed, 0.0);
  auto s = still_water(b);
  s.w(3, 4) = 0.2;
  s.P(3, 4) = 0.6;
  GaugeRecorder rec({{"a", 3.4, 4.6, 0.0}, {"still", 8.0, 8.0, 0.0}}, b, 1e-6);
  rec.record(s, 0.0);
  ASSERT_EQ(rec.samples(0).size(), 1u);
  EXPECT_DOUBLE_EQ(rec.samples(0)[0].eta, 0.2);
  EXPECT_DOUBLE_EQ(rec.samples(0)[0].u, 0.5);
  EXPECT_EQ(rec.samples(1)[0].eta, 0.0);
  EXPECT_EQ(rec.csv(0).rfind(kGaugeHeader, 0), 0u);
  EXPECT_THROW(GaugeRecorder({{"out", 11.0, 1.0, 0.0}}, b, 1e-6), InvalidInput);
}

TEST(Gauges, RecordIntervalIsHonoured) {
  const Grid g{6, 6, 1.0, 1.0, 0, 0};
  std::vector<double> bed(g.cells(), -1.0);
  const auto b = build_bathymetry(g, bed, 0.0);
  const auto s = still_water(b);
  GaugeRecorder rec({{"a", 2.0, 2.0, 0.1}}, b, 1e-6);
  for (int k = 0; k <= 100; ++k) rec.record(s, 0.01 * k);
  EXPECT_EQ(rec.samples(0).size(), 11u);
}

TEST(TimeAverages, StillSineAndErrors) {
  std::vector<GaugeSample> still(200);
  for (std::size_t k = 0; k < still.size(); ++k) still[k].t = 0.1 * k;
  const auto z = time_averages(still, 0.0, 100.0);
  EXPECT_EQ(z.mwl, 0.0);
  EXPECT_EQ(z.Hs, 0.0);

  std::vector<GaugeSample> sine;
  const double a = 0.03, T = 2.0;
  for (int k = 0; k < 2000; ++k) {
    GaugeSample smp;
    smp.t = k * (10 * T) / 2000;
    smp.eta = a * std::sin(2 * std::numbers::pi * smp.t / T);
    smp.u = -0.1;
    sine.push_back(smp);
  }
  const auto av = time_averages(sine, 0.0, 20.0);
  EXPECT_NEAR(av.mwl, 0.0, 1e-15);
  EXPECT_NEAR(av.Hs, 2.828 * a, 1e-3 * a);
  EXPECT_NEAR(av.u_avg, -0.1, 1e-13);
  EXPECT_THROW(time_averages(sine, 30.0, 40.0), InvalidInput);
}

TEST(MaxTracker, Monotone) {
  const Grid g{5, 5, 1, 1, 0, 0};
  FieldState s(g);
  MaxTracker m(s);
  s.w(1, 1) = 0.5;
  m.update(s);
  s.w(1, 1) = 0.1;
  m.update(s);
  EXPECT_EQ(m.field()(1, 1), 0.5);
}

TEST(Runup, ThresholdAndRestProfile) {
  EXPECT_NEAR((RunupSpec{0.25, 0.0, 0, 0}).threshold(Grid{5, 5, 0.05, 0.05, 0, 0}), 4.1667e-3, 1e-6);
  const ConicalIsland isl;
  const Grid g{301, 301, 0.1, 0.1, 0, 0};
  const auto b = conical_island_bathymetry(g, isl);
  const auto rest = still_water(b);
  const auto prof = runup_profile(rest.w, b, RunupSpec{0.25, 0.0, 15.0, 15.0}, 36, isl.shoreline_radius());
  ASSERT_EQ(prof.size(), 36u);
  for (const auto& p : prof) {
    // the cell-resolved shoreline sits within half a cell of the analytic one
    EXPECT_NEAR(p.radius, isl.shoreline_radius(), 0.5 * g.dx);
  }
  EXPECT_EQ(runup_csv(prof).rfind(kRunupHeader, 0), 0u);
  // center in water
  EXPECT_THROW(runup_profile(rest.w, b, RunupSpec{0.25, 0.0, 3.0, 3.0}, 8), InvalidInput);
}

TEST(Bilinear, ExactOnLinearFields) {
  const Grid g{8, 8, 0.5, 0.5, 1.0, 2.0};
  Field2D f(8, 8);
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 8; ++i) f(i, j) = 2.0 * g.x(i) - g.y(j);
  EXPECT_NEAR(bilinear(f, g, 2.3, 3.7), 2.0 * 2.3 - 3.7, 1e-14);
}
