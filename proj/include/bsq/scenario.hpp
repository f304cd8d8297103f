#pragma once

// Benchmark bathymetries, initial conditions, gauges and post-processing
// (time averages, runup extraction).

#include <span>
#include <string>
#include <vector>

#include "bsq/grid.hpp"

namespace bsq::scenario {

struct ConicalIsland {
  double base_diameter = 7.2;  // m
  double slope = 0.25;
  double crest_height = 0.625;  // truncation of the cone
  double depth = 0.32;          // still-water depth, also ws
  double cx = 15.0;
  double cy = 15.0;

  /// Radius where the cone meets the still-water level.
  double shoreline_radius() const { return base_diameter / 2.0 - depth / slope; }
};

double conical_island_bed(const ConicalIsland& island, double x, double y);

/// Throws InvalidInput if the base does not fit inside the grid.
Bathymetry conical_island_bathymetry(const Grid& grid, const ConicalIsland& island);

/// Rip-channel beach; y measured from the channel centerline.
double hamm_bed(double x, double y);
Bathymetry hamm_bathymetry(const Grid& grid);

/// Flat floor at -depth with a Gaussian hump of the given height; ws = 0.
Bathymetry gaussian_hump_bathymetry(const Grid& grid, double depth, double height, double width, double cx,
                                    double cy);

struct SolitaryWaveSpec {
  double H = 0.0;
  double d0 = 0.0;
  double x0 = 0.0;
  int direction = +1;  // +1 travels towards +x
  double breaking_ratio = 0.78;
  double g = 9.81;

  void validate() const;
  double kappa() const;
  double eta(double x) const;
};

/// Surface and flux of a solitary wave over still water. Sets *tail to the
/// largest |eta|/H on the west or east boundary column when non-null; a
/// warning is printed if it exceeds 1e-6.
FieldState solitary_wave_ic(const SolitaryWaveSpec& spec, const Bathymetry& bathy, double* tail = nullptr);

/// Water at `w_left` west of x_dam, dry bed (w = b) east of it.
FieldState dam_break_ic(const Bathymetry& bathy, double x_dam, double w_left);

struct GaugeSpec {
  std::string id;
  double x = 0.0;
  double y = 0.0;
  double record_interval = 0.0;  // s, 0 records every call
};

struct GaugeSample {
  double t = 0.0;
  double eta = 0.0;
  double P = 0.0;
  double Q = 0.0;
  double u = 0.0;
  double v = 0.0;
};

inline constexpr const char* kGaugeHeader = "t,eta,P,Q,u,v";

/// Nearest-cell sampler. Throws InvalidInput for gauges outside the domain.
class GaugeRecorder {
 public:
  GaugeRecorder() = default;
  GaugeRecorder(std::vector<GaugeSpec> gauges, const Bathymetry& bathy, double h_eps);

  /// Appends a sample to each gauge whose interval has elapsed.
  void record(const FieldState& state, double t);

  const std::vector<GaugeSpec>& gauges() const { return gauges_; }
  const std::vector<GaugeSample>& samples(std::size_t k) const { return samples_[k]; }
  std::string csv(std::size_t k) const;

 private:
  std::vector<GaugeSpec> gauges_;
  std::vector<int> ci_, cj_;
  std::vector<double> b_;
  std::vector<double> last_;
  std::vector<std::vector<GaugeSample>> samples_;
  double ws_ = 0.0;
  double h_eps_ = 0.0;
};

struct Averages {
  double mwl = 0.0;
  double u_avg = 0.0;
  double v_avg = 0.0;
  double Hs = 0.0;
  std::size_t count = 0;
};

/// Means of eta, u, v and 4 * stddev(eta) over samples with t in [t0, t1].
/// Throws InvalidInput for fewer than `min_samples` samples in the window.
Averages time_averages(std::span<const GaugeSample> samples, double t0, double t1, std::size_t min_samples = 100);

/// Running per-cell maximum of w.
class MaxTracker {
 public:
  MaxTracker() = default;
  explicit MaxTracker(const FieldState& initial);
  void update(const FieldState& s);
  const Field2D& field() const { return max_w_; }

 private:
  Field2D max_w_;
};

struct RunupSpec {
  double s = 0.25;     // side slope
  double delta = 0.0;  // m, <= 0 selects s * dx / 3
  double cx = 0.0;
  double cy = 0.0;

  double threshold(const Grid& grid) const { return delta > 0.0 ? delta : s * grid.dx / 3.0; }
};

struct RunupPoint {
  double azimuth_deg = 0.0;
  double radius = 0.0;      // innermost inundated radius along the ray
  double normalized = 0.0;  // radius / reference, 0 when no reference
};

inline constexpr const char* kRunupHeader = "azimuth_deg,radius_m,normalized";

/// For each of n azimuths (0 deg = +x, counter-clockwise) marches outward
/// from the center and returns the first radius where the bilinearly
/// sampled max_w - b reaches the threshold, refined by linear
/// interpolation. Throws InvalidInput if the center is wet or a ray
/// leaves the domain without finding water.
std::vector<RunupPoint> runup_profile(const Field2D& max_w, const Bathymetry& bathy, const RunupSpec& spec,
                                      int n_azimuths, double reference_radius = 0.0);

std::string runup_csv(const std::vector<RunupPoint>& profile);

/// Bilinear interpolation of interior cell-center values; clamps to the
/// outermost centers.
double bilinear(const Field2D& f, const Grid& grid, double x, double y);

/// Total water volume sum(max(w - b, 0)) dx dy over the interior.
double water_volume(const FieldState& s, const Bathymetry& bathy);

}  // namespace bsq::scenario
