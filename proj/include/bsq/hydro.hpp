#pragma once

// Central-upwind finite-volume evaluation of the shallow-water flux
// divergence and bed-slope source (the well-balanced, positivity-preserving
// variant with piecewise-linear reconstruction of the surface elevation),
// plus quadratic bottom friction.

#include <algorithm>
#include <cmath>

#include "bsq/grid.hpp"

namespace bsq::hydro {

struct NumericsParams {
  double theta = 1.5;         // generalized minmod parameter, [1, 2]
  double cfl_target = 0.125;  // (0, 0.25)

  void validate() const;
};

/// Generalized minmod of {theta (c - l), (r - l) / 2, theta (r - c)}.
double minmod_slope(double a_left, double a_center, double a_right, double theta);

/// Reconstructed values on one face of a cell, oriented so that `qn` is the
/// face-normal flux and `qt` the tangential one.
struct FaceState {
  double w = 0.0;
  double h = 0.0;
  double qn = 0.0;
  double qt = 0.0;
  double un = 0.0;
  double ut = 0.0;
};

struct Flux3 {
  double mass = 0.0;
  double normal = 0.0;
  double tangential = 0.0;
};

/// Builds a face state from reconstructed (w, qn, qt), bed at the face and
/// the depth floor. Velocities use max(h, h_eps); fluxes are recomputed as
/// h * u so that they vanish with the depth.
FaceState make_face_state(double w, double qn, double qt, double b_face, double h_eps);

/// Central-upwind numerical flux between a left and a right face state.
Flux3 central_upwind_flux(const FaceState& left, const FaceState& right, double g);

/// Physical flux F(U) in the face-normal direction.
Flux3 physical_flux(const FaceState& s, double g);

/// Face values of every cell in the ghost ring -1..n: the value on its east,
/// west, north and south faces.
struct SideValues {
  Field2D w, h, P, Q, u, v;
  SideValues() = default;
  explicit SideValues(const Grid& g)
      : w(g.nx, g.ny), h(g.nx, g.ny), P(g.nx, g.ny), Q(g.nx, g.ny), u(g.nx, g.ny), v(g.nx, g.ny) {}
};

struct InterfaceStates {
  SideValues east, west, north, south;
  Field2D u_cell, v_cell;  // desingularized cell velocities, scratch
  InterfaceStates() = default;
  explicit InterfaceStates(const Grid& g)
      : east(g), west(g), north(g), south(g), u_cell(g.nx, g.ny), v_cell(g.nx, g.ny) {}
};

/// Numerical fluxes: x arrays at the east face of each cell, y arrays at the
/// north face.
struct FaceFluxes {
  Field2D x_mass, x_normal, x_tangential;
  Field2D y_mass, y_normal, y_tangential;
  FaceFluxes() = default;
  explicit FaceFluxes(const Grid& g);
};

/// Scratch reused across evaluations.
struct Workspace {
  InterfaceStates faces;
  FaceFluxes fluxes;
  Workspace() = default;
  explicit Workspace(const Grid& g) : faces(g), fluxes(g) {}
};

double effective_h_eps(const Bathymetry& bathy, const PhysParams& phys);
double effective_h_dry(const Bathymetry& bathy, const PhysParams& phys);

inline double cell_depth(const FieldState& s, const Bathymetry& bathy, int i, int j) {
  return std::max(s.w(i, j) - bathy.b(i, j), 0.0);
}

/// sqrt(2) h q / sqrt(h^4 + max(h^4, e4)): q / h for h^4 >= e4, tends to 0 with h.
inline double desingularized_velocity(double q, double h, double e4) {
  const double h2 = h * h;
  const double h4 = h2 * h2;
  if (h4 >= e4 && h > 0.0) return q / h;
  const double den = std::sqrt(h4 + e4);
  return den > 0.0 ? std::sqrt(2.0) * h * q / den : 0.0;
}

/// Thin-film momentum damping on interior cells:
/// P := h u with u = sqrt(2) h P / sqrt(h^4 + max(h^4, h_dry^4)), same for Q.
/// Leaves cells deeper than h_dry untouched.
void desingularize(FieldState& state, const Bathymetry& bathy, double h_dry);

/// Piecewise-linear reconstruction with positivity correction in every cell
/// of the ring -1..n (ghost cells must be populated).
void reconstruct(const FieldState& state, const Bathymetry& bathy, const NumericsParams& numerics,
                 const PhysParams& phys, InterfaceStates& out);
InterfaceStates reconstruct(const FieldState& state, const Bathymetry& bathy,
                            const NumericsParams& numerics, const PhysParams& phys);

/// Per-cell rates of (w, P, Q): flux divergence plus well-balanced bed-slope
/// source. Interior only; the output fields are resized as needed.
struct Rates {
  Field2D w, P, Q;
};

void nlsw_divergence_and_source(const FieldState& state, const Bathymetry& bathy,
                                const NumericsParams& numerics, const PhysParams& phys,
                                Workspace& scratch, Rates& out);
Rates nlsw_divergence_and_source(const FieldState& state, const Bathymetry& bathy,
                                 const NumericsParams& numerics, const PhysParams& phys);

struct FrictionTerms {
  double f1 = 0.0;
  double f2 = 0.0;
};

/// f = c_f (P, Q) sqrt(P^2 + Q^2) / h*^2 with h* = max(h, h_eps). Enters the
/// momentum rates with a minus sign.
FrictionTerms friction(double P, double Q, double h, double c_f, double h_eps);

}  // namespace bsq::hydro
