#include "bsq/boundary.hpp"

#include <cmath>
#include <limits>
#include <type_traits>
#include <numbers>
#include <random>
#include <string>

#include "bsq/error.hpp"

namespace bsq::boundary {

const char* to_string(Side side) {
  switch (side) {
    case Side::West: return "west";
    case Side::East: return "east";
    case Side::South: return "south";
    case Side::North: return "north";
  }
  return "?";
}

double solve_dispersion(double omega, double depth, double g) {
  if (!(omega > 0.0) || !(depth > 0.0) || !(g > 0.0) || !std::isfinite(omega) || !std::isfinite(depth)) {
    throw InvalidInput("dispersion relation needs positive omega, depth and g");
  }
  const double target = omega * omega;
  auto residual = [&](double k) { return g * k * std::tanh(k * depth) - target; };

  // Both asymptotes bound the root from below; grow an upper bracket.
  double lo = std::max(target / g, omega / std::sqrt(g * depth));
  double hi = lo;
  while (residual(hi) < 0.0) hi *= 2.0;
  if (residual(lo) >= 0.0) return lo;

  double k = target / g;  // deep-water seed
  if (k < lo || k > hi) k = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    const double f = residual(k);
    if (f == 0.0) return k;
    if (f < 0.0) lo = k; else hi = k;
    const double t = std::tanh(k * depth);
    const double df = g * t + g * k * depth * (1.0 - t * t);
    double next = k - f / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - k) <= 4e-16 * k) {
      k = next;
      break;
    }
    k = next;
  }
  if (std::abs(residual(k)) <= 1e-12 * target) return k;
  throw InvalidInput("dispersion relation did not converge in 100 iterations");
}

WaveComponent make_component(double amplitude, double period, double phase, double depth, double g) {
  if (!(period > 0.0)) throw InvalidInput("wave period must be positive");
  if (!(amplitude >= 0.0)) throw InvalidInput("wave amplitude must be non-negative");
  const double omega = 2.0 * std::numbers::pi / period;
  return {amplitude, omega, solve_dispersion(omega, depth, g), phase};
}

namespace {

template <typename Fn>
void for_side_cells(const Grid& g, Side side, Fn&& fn) {
  if (side == Side::West || side == Side::East) {
    const int i = side == Side::West ? 0 : g.nx - 1;
    for (int j = 0; j < g.ny; ++j) fn(i, j);
  } else {
    const int j = side == Side::South ? 0 : g.ny - 1;
    for (int i = 0; i < g.nx; ++i) fn(i, j);
  }
}

double min_side_depth(const Bathymetry& bathy, Side side) {
  double m = std::numeric_limits<double>::infinity();
  for_side_cells(bathy.grid, side, [&](int i, int j) { m = std::min(m, bathy.d(i, j)); });
  return m;
}

// Ghost cells on `side`: calls fn(ghost_i, ghost_j, mirror_i, mirror_j) for
// both layers. West/east cover interior rows; south/north the full padded
// width.
template <typename Fn>
void for_ghosts(const Grid& g, Side side, Fn&& fn) {
  switch (side) {
    case Side::West:
      for (int j = 0; j < g.ny; ++j)
        for (int k = 1; k <= kGhost; ++k) fn(-k, j, k - 1, j);
      break;
    case Side::East:
      for (int j = 0; j < g.ny; ++j)
        for (int k = 1; k <= kGhost; ++k) fn(g.nx - 1 + k, j, g.nx - k, j);
      break;
    case Side::South:
      for (int i = -kGhost; i < g.nx + kGhost; ++i)
        for (int k = 1; k <= kGhost; ++k) fn(i, -k, i, k - 1);
      break;
    case Side::North:
      for (int i = -kGhost; i < g.nx + kGhost; ++i)
        for (int k = 1; k <= kGhost; ++k) fn(i, g.ny - 1 + k, i, g.ny - k);
      break;
  }
}

bool normal_is_x(Side side) { return side == Side::West || side == Side::East; }

// +1 when waves generated on this side travel in the positive axis direction.
double inward_sign(Side side) { return (side == Side::West || side == Side::South) ? 1.0 : -1.0; }

double ramp_factor(double t, double ramp) {
  if (ramp <= 0.0 || t >= ramp) return 1.0;
  if (t <= 0.0) return 0.0;
  return 0.5 * (1.0 - std::cos(std::numbers::pi * t / ramp));
}

void apply_maker(FieldState& s, const Bathymetry& bathy, Side side, const MakerSignal& sig) {
  const double qn = inward_sign(side) * sig.flux;
  const double w = bathy.ws + sig.eta;
  const bool nx_normal = normal_is_x(side);
  for_ghosts(bathy.grid, side, [&](int gi, int gj, int, int) {
    s.w(gi, gj) = std::max(w, bathy.b(gi, gj));
    s.P(gi, gj) = nx_normal ? qn : 0.0;
    s.Q(gi, gj) = nx_normal ? 0.0 : qn;
  });
}

}  // namespace

double side_depth(const Bathymetry& bathy, Side side) {
  double sum = 0.0;
  int n = 0;
  for_side_cells(bathy.grid, side, [&](int i, int j) {
    sum += bathy.d(i, j);
    ++n;
  });
  return sum / n;
}

void apply_wall(FieldState& s, const Bathymetry& bathy, Side side) {
  const bool nx_normal = normal_is_x(side);
  for_ghosts(bathy.grid, side, [&](int gi, int gj, int mi, int mj) {
    s.w(gi, gj) = s.w(mi, mj);
    s.P(gi, gj) = nx_normal ? -s.P(mi, mj) : s.P(mi, mj);
    s.Q(gi, gj) = nx_normal ? s.Q(mi, mj) : -s.Q(mi, mj);
  });
}

MakerSignal maker_signal(const std::vector<WaveComponent>& waves, double t, double ramp) {
  MakerSignal sig;
  for (const auto& c : waves) {
    const double sn = std::sin(c.omega * t + c.phase);
    sig.eta += c.amplitude * sn;
    sig.flux += c.amplitude * (c.omega / c.k) * sn;
  }
  const double r = ramp_factor(t, ramp);
  sig.eta *= r;
  sig.flux *= r;
  return sig;
}

void apply_sine_maker(FieldState& s, const Bathymetry& bathy, Side side, const SineMaker& maker, double t) {
  if (!(min_side_depth(bathy, side) > 0.0)) {
    throw InvalidInput(std::string("sine wavemaker on dry ") + to_string(side) + " boundary");
  }
  apply_maker(s, bathy, side, maker_signal({maker.wave}, t, maker.ramp));
}

void apply_irregular_maker(FieldState& s, const Bathymetry& bathy, Side side, const IrregularMaker& maker,
                           double t) {
  if (!(min_side_depth(bathy, side) > 0.0)) {
    throw InvalidInput(std::string("irregular wavemaker on dry ") + to_string(side) + " boundary");
  }
  apply_maker(s, bathy, side, maker_signal(maker.waves, t, maker.ramp));
}

void apply_sponge(FieldState& s, const Bathymetry& bathy, Side side, const Sponge& sponge, double dt) {
  if (sponge.lambda_max == 0.0 || sponge.width <= 0.0) return;
  const Grid& g = bathy.grid;
  const double L = sponge.width;
  auto factor = [&](double dist) {
    const double r = (L - dist) / L;
    return std::exp(-sponge.lambda_max * r * r * dt);
  };
  auto damp = [&](int i, int j, double f) {
    const double w = bathy.ws + (s.w(i, j) - bathy.ws) * f;
    s.w(i, j) = std::max(w, bathy.b(i, j));
    s.P(i, j) *= f;
    s.Q(i, j) *= f;
  };
  if (normal_is_x(side)) {
    for (int i = 0; i < g.nx; ++i) {
      const double dist = side == Side::West ? (i + 0.5) * g.dx : (g.nx - i - 0.5) * g.dx;
      if (dist >= L) continue;
      const double f = factor(dist);
      for (int j = 0; j < g.ny; ++j) damp(i, j, f);
    }
  } else {
    for (int j = 0; j < g.ny; ++j) {
      const double dist = side == Side::South ? (j + 0.5) * g.dy : (g.ny - j - 0.5) * g.dy;
      if (dist >= L) continue;
      const double f = factor(dist);
      for (int i = 0; i < g.nx; ++i) damp(i, j, f);
    }
  }
}

double jonswap_density(double f, double fp, double gamma, double g) {
  if (!(f > 0.0)) return 0.0;
  const double sigma = f <= fp ? 0.07 : 0.09;
  const double two_pi = 2.0 * std::numbers::pi;
  const double r = std::exp(-(f - fp) * (f - fp) / (2.0 * sigma * sigma * fp * fp));
  return g * g / std::pow(two_pi, 4) * std::pow(f, -5.0) * std::exp(-1.25 * std::pow(fp / f, 4)) * std::pow(gamma, r);
}

std::vector<WaveComponent> jonswap_components(const SpectrumSpec& spec, double depth, double g) {
  if (!(spec.Hs > 0.0) || !(spec.Tp > 0.0) || !(spec.df > 0.0) || spec.n_components < 1) {
    throw InvalidInput("spectrum needs Hs, Tp, df > 0 and at least one component");
  }
  const double fp = 1.0 / spec.Tp;
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

  std::vector<WaveComponent> out;
  double energy = 0.0;
  for (int m = 0; m < spec.n_components; ++m) {
    const double f = fp + (m - spec.n_components / 2) * spec.df;
    const double ph = phase(rng);
    if (!(f > 0.0)) continue;
    const double a = std::sqrt(2.0 * jonswap_density(f, fp, spec.gamma, g) * spec.df);
    const double omega = 2.0 * std::numbers::pi * f;
    out.push_back({a, omega, solve_dispersion(omega, depth, g), ph});
    energy += a * a / 2.0;
  }
  if (out.empty() || !(energy > 0.0)) throw InvalidInput("spectrum has no positive-frequency energy");
  const double scale = spec.Hs / (4.0 * std::sqrt(energy));
  for (auto& c : out) c.amplitude *= scale;
  return out;
}

void validate(const BoundarySet& set, const Bathymetry& bathy) {
  for (int k = 0; k < 4; ++k) {
    const Side side = static_cast<Side>(k);
    const auto& spec = set[side];
    if (std::holds_alternative<SineMaker>(spec) || std::holds_alternative<IrregularMaker>(spec)) {
      if (!(min_side_depth(bathy, side) > 0.0)) {
        throw InvalidInput(std::string("wavemaker on ") + to_string(side) + " boundary needs positive depth");
      }
    }
    if (const auto* sp = std::get_if<Sponge>(&spec)) {
      const double cell = normal_is_x(side) ? bathy.grid.dx : bathy.grid.dy;
      if (sp->width < 2.0 * cell) {
        throw InvalidInput(std::string("sponge on ") + to_string(side) + " boundary narrower than two cells");
      }
      if (!(sp->lambda_max >= 0.0)) throw InvalidInput("sponge strength must be non-negative");
    }
  }
}

void apply_ghosts(FieldState& s, const Bathymetry& bathy, const BoundarySet& set, double t) {
  for (int k = 0; k < 4; ++k) {
    const Side side = static_cast<Side>(k);
    std::visit(
        [&](const auto& spec) {
          using T = std::decay_t<decltype(spec)>;
          if constexpr (std::is_same_v<T, SineMaker>) {
            apply_sine_maker(s, bathy, side, spec, t);
          } else if constexpr (std::is_same_v<T, IrregularMaker>) {
            apply_irregular_maker(s, bathy, side, spec, t);
          } else {
            apply_wall(s, bathy, side);
          }
        },
        set[side]);
  }
}

implicit::LineClosures line_closures(const Bathymetry& bathy, const BoundarySet& set, double t) {
  const Grid& g = bathy.grid;
  implicit::LineClosures out;
  auto closure = [&](Side side) {
    implicit::GhostClosure c{-1.0, 0.0};
    std::visit(
        [&](const auto& spec) {
          using T = std::decay_t<decltype(spec)>;
          if constexpr (std::is_same_v<T, SineMaker>) {
            c = {0.0, inward_sign(side) * maker_signal({spec.wave}, t, spec.ramp).flux};
          } else if constexpr (std::is_same_v<T, IrregularMaker>) {
            c = {0.0, inward_sign(side) * maker_signal(spec.waves, t, spec.ramp).flux};
          }
        },
        set[side]);
    return c;
  };
  out.west.assign(g.ny, closure(Side::West));
  out.east.assign(g.ny, closure(Side::East));
  out.south.assign(g.nx, closure(Side::South));
  out.north.assign(g.nx, closure(Side::North));
  return out;
}

void apply_sponges(FieldState& s, const Bathymetry& bathy, const BoundarySet& set, double dt) {
  for (int k = 0; k < 4; ++k) {
    const Side side = static_cast<Side>(k);
    if (const auto* sp = std::get_if<Sponge>(&set[side])) apply_sponge(s, bathy, side, *sp, dt);
  }
}

}  // namespace bsq::boundary
