#include "bsq/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <numbers>

#include "bsq/error.hpp"

namespace bsq::scenario {

double conical_island_bed(const ConicalIsland& c, double x, double y) {
  const double r = std::hypot(x - c.cx, y - c.cy);
  const double R = c.base_diameter / 2.0;
  if (r >= R) return 0.0;
  return std::min(c.crest_height, c.slope * (R - r));
}

namespace {

Bathymetry from_function(const Grid& grid, double ws, auto&& bed) {
  grid.validate();
  Field2D f(grid.nx, grid.ny);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) f(i, j) = bed(grid.x(i), grid.y(j));
  return build_bathymetry(grid, f, ws);
}

}  // namespace

// Datum at the basin floor, so ws = depth.
Bathymetry conical_island_bathymetry(const Grid& grid, const ConicalIsland& c) {
  if (!(c.base_diameter > 0.0 && c.slope > 0.0 && c.depth > 0.0 && c.crest_height > 0.0)) {
    throw InvalidInput("conical island parameters must be positive");
  }
  const double R = c.base_diameter / 2.0;
  if (c.cx - R < grid.x0 || c.cx + R > grid.x0 + grid.length_x() || c.cy - R < grid.y0 ||
      c.cy + R > grid.y0 + grid.length_y()) {
    throw InvalidInput("conical island does not fit in the domain");
  }
  return from_function(grid, c.depth, [&](double x, double y) { return conical_island_bed(c, x, y); });
}

double hamm_bed(double x, double y) {
  const double s = 18.0 - x;
  const double c = std::cos(std::numbers::pi * y / 30.0);
  const double c2 = c * c;
  const double c10 = c2 * c2 * c2 * c2 * c2;
  return 0.1 - (s / 30.0) * (1.0 + 3.0 * std::exp(-s / 3.0) * c10);
}

Bathymetry hamm_bathymetry(const Grid& grid) {
  return from_function(grid, 0.0, [](double x, double y) { return hamm_bed(x, y); });
}

Bathymetry gaussian_hump_bathymetry(const Grid& grid, double depth, double height, double width, double cx,
                                    double cy) {
  if (!(depth > 0.0) || !(width > 0.0)) throw InvalidInput("hump depth and width must be positive");
  return from_function(grid, 0.0, [&](double x, double y) {
    const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
    return -depth + height * std::exp(-r2 / (width * width));
  });
}

void SolitaryWaveSpec::validate() const {
  if (!(d0 > 0.0)) throw InvalidInput("solitary wave depth must be positive");
  if (!(H > 0.0)) throw InvalidInput("solitary wave height must be positive");
  if (!(H < breaking_ratio * d0)) throw InvalidInput("solitary wave exceeds the breaking limit H < " +
                                                     std::to_string(breaking_ratio) + " d0");
  if (direction != 1 && direction != -1) throw InvalidInput("solitary wave direction must be +1 or -1");
}

double SolitaryWaveSpec::kappa() const { return std::sqrt(3.0 * H / (4.0 * d0 * d0 * d0)); }

double SolitaryWaveSpec::eta(double x) const {
  const double s = 1.0 / std::cosh(kappa() * (x - x0));
  return H * s * s;
}

FieldState solitary_wave_ic(const SolitaryWaveSpec& spec, const Bathymetry& bathy, double* tail) {
  spec.validate();
  const Grid& g = bathy.grid;
  FieldState s = still_water(bathy);
  const double c = std::sqrt(spec.g * spec.d0);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (bathy.d(i, j) <= 0.0) continue;
      const double eta = spec.eta(g.x(i));
      s.w(i, j) = bathy.ws + eta;
      s.P(i, j) = spec.direction * eta * c * (1.0 + eta / spec.d0);
    }
  }
  const double edge = std::max(spec.eta(g.x(0)), spec.eta(g.x(g.nx - 1))) / spec.H;
  if (tail) *tail = edge;
  if (edge > 1e-6) {
    std::cerr << "warning: solitary wave tail reaches the boundary (eta/H = " << edge << ")\n";
  }
  return s;
}

FieldState dam_break_ic(const Bathymetry& bathy, double x_dam, double w_left) {
  const Grid& g = bathy.grid;
  FieldState s(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double b = bathy.b(i, j);
      s.w(i, j) = g.x(i) < x_dam ? std::max(w_left, b) : b;
    }
  }
  return s;
}

GaugeRecorder::GaugeRecorder(std::vector<GaugeSpec> gauges, const Bathymetry& bathy, double h_eps)
    : gauges_(std::move(gauges)), ws_(bathy.ws), h_eps_(h_eps) {
  const Grid& g = bathy.grid;
  for (const auto& gs : gauges_) {
    const double fi = (gs.x - g.x0) / g.dx;
    const double fj = (gs.y - g.y0) / g.dy;
    if (!(fi >= 0.0 && fi <= g.nx && fj >= 0.0 && fj <= g.ny)) {
      throw InvalidInput("gauge '" + gs.id + "' lies outside the domain");
    }
    if (gs.record_interval < 0.0) throw InvalidInput("gauge '" + gs.id + "' has a negative interval");
    ci_.push_back(std::min(static_cast<int>(fi), g.nx - 1));
    cj_.push_back(std::min(static_cast<int>(fj), g.ny - 1));
    b_.push_back(bathy.b(ci_.back(), cj_.back()));
  }
  last_.assign(gauges_.size(), -std::numeric_limits<double>::infinity());
  samples_.resize(gauges_.size());
}

void GaugeRecorder::record(const FieldState& state, double t) {
  for (std::size_t k = 0; k < gauges_.size(); ++k) {
    const double every = gauges_[k].record_interval;
    if (every > 0.0 && t < last_[k] + every * (1.0 - 1e-9)) continue;
    const int i = ci_[k];
    const int j = cj_[k];
    GaugeSample g;
    g.t = t;
    const double w = state.w(i, j);
    const double h = std::max(w - b_[k], 0.0);
    g.eta = w - ws_;
    g.P = state.P(i, j);
    g.Q = state.Q(i, j);
    g.u = g.P / std::max(h, h_eps_);
    g.v = g.Q / std::max(h, h_eps_);
    samples_[k].push_back(g);
    last_[k] = t;
  }
}

std::string GaugeRecorder::csv(std::size_t k) const {
  std::string out = std::string(kGaugeHeader) + "\n";
  char buf[256];
  for (const auto& s : samples_.at(k)) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.eta, s.P, s.Q, s.u, s.v);
    out += buf;
  }
  return out;
}

Averages time_averages(std::span<const GaugeSample> samples, double t0, double t1, std::size_t min_samples) {
  if (!(t1 >= t0)) throw InvalidInput("averaging window is reversed");
  Averages a;
  for (const auto& s : samples) {
    if (s.t < t0 || s.t > t1) continue;
    a.mwl += s.eta;
    a.u_avg += s.u;
    a.v_avg += s.v;
    ++a.count;
  }
  if (a.count == 0 || a.count < min_samples) {
    throw InvalidInput("averaging window holds " + std::to_string(a.count) + " samples, need " +
                       std::to_string(std::max<std::size_t>(min_samples, 1)));
  }
  const double n = static_cast<double>(a.count);
  a.mwl /= n;
  a.u_avg /= n;
  a.v_avg /= n;
  double var = 0.0;
  for (const auto& s : samples) {
    if (s.t < t0 || s.t > t1) continue;
    var += (s.eta - a.mwl) * (s.eta - a.mwl);
  }
  a.Hs = 4.0 * std::sqrt(var / n);
  return a;
}

MaxTracker::MaxTracker(const FieldState& initial) : max_w_(initial.w) {}

void MaxTracker::update(const FieldState& s) {
  auto dst = max_w_.raw();
  auto src = s.w.raw();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = std::max(dst[k], src[k]);
}

double bilinear(const Field2D& f, const Grid& grid, double x, double y) {
  const double fi = std::clamp((x - grid.x0) / grid.dx - 0.5, 0.0, grid.nx - 1.0);
  const double fj = std::clamp((y - grid.y0) / grid.dy - 0.5, 0.0, grid.ny - 1.0);
  const int i = std::min(static_cast<int>(fi), grid.nx - 2);
  const int j = std::min(static_cast<int>(fj), grid.ny - 2);
  const double a = fi - i;
  const double b = fj - j;
  return (1 - a) * (1 - b) * f(i, j) + a * (1 - b) * f(i + 1, j) + (1 - a) * b * f(i, j + 1) +
         a * b * f(i + 1, j + 1);
}

std::vector<RunupPoint> runup_profile(const Field2D& max_w, const Bathymetry& bathy, const RunupSpec& spec,
                                      int n_azimuths, double reference_radius) {
  if (n_azimuths < 1) throw InvalidInput("need at least one azimuth");
  const Grid& g = bathy.grid;
  const double delta = spec.threshold(g);
  if (!(delta > 0.0)) throw InvalidInput("runup threshold must be positive");
  auto depth = [&](double x, double y) { return bilinear(max_w, g, x, y) - bilinear(bathy.b, g, x, y); };
  if (depth(spec.cx, spec.cy) >= delta) throw InvalidInput("runup center is inundated; no shoreline to trace");

  const double step = 0.05 * std::min(g.dx, g.dy);
  std::vector<RunupPoint> out(static_cast<std::size_t>(n_azimuths));
  for (int k = 0; k < n_azimuths; ++k) {
    const double az = 360.0 * k / n_azimuths;
    const double ca = std::cos(az * std::numbers::pi / 180.0);
    const double sa = std::sin(az * std::numbers::pi / 180.0);
    double r_prev = 0.0;
    double d_prev = depth(spec.cx, spec.cy);
    double found = -1.0;
    for (double r = step;; r += step) {
      const double x = spec.cx + r * ca;
      const double y = spec.cy + r * sa;
      if (x < g.x(0) || x > g.x(g.nx - 1) || y < g.y(0) || y > g.y(g.ny - 1)) break;
      const double d = depth(x, y);
      if (d >= delta) {
        found = r_prev + (r - r_prev) * (delta - d_prev) / (d - d_prev);
        break;
      }
      r_prev = r;
      d_prev = d;
    }
    if (found < 0.0) {
      throw InvalidInput("no inundated point along azimuth " + std::to_string(az) + " deg");
    }
    out[k] = {az, found, reference_radius > 0.0 ? found / reference_radius : 0.0};
  }
  return out;
}

std::string runup_csv(const std::vector<RunupPoint>& profile) {
  std::string out = std::string(kRunupHeader) + "\n";
  char buf[128];
  for (const auto& p : profile) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.azimuth_deg, p.radius, p.normalized);
    out += buf;
  }
  return out;
}

double water_volume(const FieldState& s, const Bathymetry& bathy) {
  const Grid& g = bathy.grid;
  double v = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) v += std::max(s.w(i, j) - bathy.b(i, j), 0.0);
  return v * g.dx * g.dy;
}

}  // namespace bsq::scenario
