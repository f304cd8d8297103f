#pragma once

// Ghost-cell policies per domain side: reflective wall, sine wavemaker,
// irregular (spectral) wavemaker, and sponge layer.

#include <array>
#include <cstdint>
#include <variant>
#include <vector>

#include "bsq/grid.hpp"
#include "bsq/implicit.hpp"

namespace bsq::boundary {

enum class Side { West, East, South, North };

const char* to_string(Side side);

struct WaveComponent {
  double amplitude = 0.0;  // m
  double omega = 0.0;      // rad/s
  double k = 0.0;          // rad/m
  double phase = 0.0;      // rad
};

/// Builds a component whose wavenumber satisfies the linear dispersion
/// relation at depth `depth`.
WaveComponent make_component(double amplitude, double period, double phase, double depth, double g);

struct SpectrumSpec {
  double Hs = 0.0;        // significant waveheight, m
  double Tp = 0.0;        // peak period, s
  double gamma = 3.3;     // peak enhancement
  int n_components = 1;
  double df = 0.01;       // Hz
  std::uint64_t seed = 0;
};

struct Wall {};

struct SineMaker {
  WaveComponent wave;
  double ramp = 0.0;  // s, smooth start; 0 disables
};

struct IrregularMaker {
  std::vector<WaveComponent> waves;
  double ramp = 0.0;
};

/// Reflective ghosts plus exponential damping of (w - ws, P, Q) in a band
/// of width `width` adjacent to the side.
struct Sponge {
  double width = 0.0;       // m
  double lambda_max = 0.0;  // 1/s
};

using BoundarySpec = std::variant<Wall, SineMaker, IrregularMaker, Sponge>;

/// One condition per side, indexed by Side.
struct BoundarySet {
  std::array<BoundarySpec, 4> sides{Wall{}, Wall{}, Wall{}, Wall{}};

  BoundarySpec& operator[](Side s) { return sides[static_cast<int>(s)]; }
  const BoundarySpec& operator[](Side s) const { return sides[static_cast<int>(s)]; }
};

/// k with omega^2 = g k tanh(k d), Newton from the deep-water seed.
double solve_dispersion(double omega, double depth, double g);

/// Mean still-water depth over the interior cells adjacent to `side`.
double side_depth(const Bathymetry& bathy, Side side);

/// Even w, odd normal flux, even tangential flux.
void apply_wall(FieldState& s, const Bathymetry& bathy, Side side);

/// Surface elevation and normal flux of a wavemaker at time t (before the
/// ramp), summed over components.
struct MakerSignal {
  double eta = 0.0;
  double flux = 0.0;
};
MakerSignal maker_signal(const std::vector<WaveComponent>& waves, double t, double ramp);

void apply_sine_maker(FieldState& s, const Bathymetry& bathy, Side side, const SineMaker& maker, double t);
void apply_irregular_maker(FieldState& s, const Bathymetry& bathy, Side side, const IrregularMaker& maker, double t);

/// Damps the band by exp(-lambda(s) dt), lambda = lambda_max ((L - s)/L)^2,
/// s the distance of the cell center from the side.
void apply_sponge(FieldState& s, const Bathymetry& bathy, Side side, const Sponge& sponge, double dt);

/// JONSWAP discretization: n components at f_p + (m - n/2) df (f > 0),
/// amplitudes sqrt(2 S df) rescaled to the requested Hs, phases uniform
/// from the seed, wavenumbers at `depth`.
std::vector<WaveComponent> jonswap_components(const SpectrumSpec& spec, double depth, double g);

/// Unnormalized JONSWAP density at frequency f (Hz).
double jonswap_density(double f, double fp, double gamma, double g);

/// Fills all ghost cells at time t. Order: west, east, south, north (later
/// sides own the corners). Also validates wavemaker sides have depth.
void apply_ghosts(FieldState& s, const Bathymetry& bathy, const BoundarySet& set, double t);

/// Closures for the momentum line solves at time t.
implicit::LineClosures line_closures(const Bathymetry& bathy, const BoundarySet& set, double t);

/// Applies every sponge side.
void apply_sponges(FieldState& s, const Bathymetry& bathy, const BoundarySet& set, double dt);

/// Throws InvalidInput for wavemakers on dry sides or sponges narrower than
/// two cells.
void validate(const BoundarySet& set, const Bathymetry& bathy);

}  // namespace bsq::boundary
