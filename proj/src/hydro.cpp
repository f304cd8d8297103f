#include "bsq/hydro.hpp"

#include <algorithm>
#include <cmath>

#include "bsq/error.hpp"

namespace bsq::hydro {

void NumericsParams::validate() const {
  if (!(theta >= 1.0 && theta <= 2.0)) throw InvalidInput("theta must lie in [1, 2]");
  if (!(cfl_target > 0.0 && cfl_target < 0.25)) throw InvalidInput("cfl_target must lie in (0, 0.25)");
}

double minmod_slope(double l, double c, double r, double theta) {
  const double a = theta * (c - l);
  const double b = 0.5 * (r - l);
  const double d = theta * (r - c);
  if (a > 0.0 && b > 0.0 && d > 0.0) return std::min({a, b, d});
  if (a < 0.0 && b < 0.0 && d < 0.0) return std::max({a, b, d});
  return 0.0;
}

FaceState make_face_state(double w, double qn, double qt, double b_face, double h_eps) {
  FaceState s;
  s.w = w;
  s.h = std::max(w - b_face, 0.0);
  const double hs = std::max(s.h, h_eps);
  s.un = qn / hs;
  s.ut = qt / hs;
  s.qn = s.h * s.un;
  s.qt = s.h * s.ut;
  return s;
}

Flux3 physical_flux(const FaceState& s, double g) {
  return {s.qn, s.qn * s.un + 0.5 * g * s.h * s.h, s.qn * s.ut};
}

Flux3 central_upwind_flux(const FaceState& L, const FaceState& R, double g) {
  const double cl = std::sqrt(g * L.h);
  const double cr = std::sqrt(g * R.h);
  const double ap = std::max({L.un + cl, R.un + cr, 0.0});
  const double am = std::min({L.un - cl, R.un - cr, 0.0});
  const double span = ap - am;
  if (span <= 0.0) return {};
  const Flux3 fl = physical_flux(L, g);
  const Flux3 fr = physical_flux(R, g);
  const double inv = 1.0 / span;
  const double diss = ap * am * inv;
  return {
      (ap * fl.mass - am * fr.mass) * inv + diss * (R.w - L.w),
      (ap * fl.normal - am * fr.normal) * inv + diss * (R.qn - L.qn),
      (ap * fl.tangential - am * fr.tangential) * inv + diss * (R.qt - L.qt),
  };
}

double effective_h_eps(const Bathymetry& bathy, const PhysParams& phys) {
  return phys.h_eps > 0.0 ? phys.h_eps : bathy.default_h_eps();
}

double effective_h_dry(const Bathymetry& bathy, const PhysParams& phys) {
  return phys.h_dry > 0.0 ? phys.h_dry : bathy.default_h_dry();
}

void desingularize(FieldState& state, const Bathymetry& bathy, double h_dry) {
  const Grid& g = bathy.grid;
  const double e4 = h_dry * h_dry * h_dry * h_dry;
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double h = cell_depth(state, bathy, i, j);
      if (h >= h_dry) continue;
      state.P(i, j) = h * desingularized_velocity(state.P(i, j), h, e4);
      state.Q(i, j) = h * desingularized_velocity(state.Q(i, j), h, e4);
    }
  }
}

FaceFluxes::FaceFluxes(const Grid& g)
    : x_mass(g.nx, g.ny), x_normal(g.nx, g.ny), x_tangential(g.nx, g.ny),
      y_mass(g.nx, g.ny), y_normal(g.nx, g.ny), y_tangential(g.nx, g.ny) {}

namespace {

// Moves the two face values of a cell so both sit on or above the bed while
// keeping their mean at the cell average.
inline void correct_pair(double wbar, double& lo_w, double& hi_w, double b_lo, double b_hi) {
  if (hi_w < b_hi) {
    hi_w = b_hi;
    lo_w = 2.0 * wbar - b_hi;
  } else if (lo_w < b_lo) {
    lo_w = b_lo;
    hi_w = 2.0 * wbar - b_lo;
  }
  lo_w = std::max(lo_w, b_lo);
  hi_w = std::max(hi_w, b_hi);
}

struct Range {
  double lo, hi;
};

inline Range range3(double a, double b, double c) { return {std::min({a, b, c}), std::max({a, b, c})}; }

// Face velocity from the reconstructed discharge, held inside the range of
// the adjacent cell velocities so thin faces cannot outrun their cells.
inline void store(SideValues& sv, int i, int j, double w, double b_face, double P, double Q, double e4, Range ur,
                  Range vr) {
  const double h = std::max(w - b_face, 0.0);
  const double u = std::clamp(desingularized_velocity(P, h, e4), ur.lo, ur.hi);
  const double v = std::clamp(desingularized_velocity(Q, h, e4), vr.lo, vr.hi);
  sv.w(i, j) = w;
  sv.h(i, j) = h;
  sv.u(i, j) = u;
  sv.v(i, j) = v;
  sv.P(i, j) = h * u;
  sv.Q(i, j) = h * v;
}

}  // namespace

void reconstruct(const FieldState& s, const Bathymetry& bathy, const NumericsParams& numerics,
                 const PhysParams& phys, InterfaceStates& out) {
  const Grid& grid = bathy.grid;
  const int nx = grid.nx;
  const int ny = grid.ny;
  const double th = numerics.theta;
  const double hd = effective_h_dry(bathy, phys);
  const double e4 = hd * hd * hd * hd;
  if (out.east.w.nx() != nx || out.east.w.ny() != ny) out = InterfaceStates(grid);
  Field2D& uc_f = out.u_cell;
  Field2D& vc_f = out.v_cell;
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
  for (int j = -2; j < ny + 2; ++j) {
    for (int i = -2; i < nx + 2; ++i) {
      const double h = cell_depth(s, bathy, i, j);
      uc_f(i, j) = desingularized_velocity(s.P(i, j), h, e4);
      vc_f(i, j) = desingularized_velocity(s.Q(i, j), h, e4);
    }
  }

#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
  for (int j = -1; j <= ny; ++j) {
    for (int i = -1; i <= nx; ++i) {
      const double wc = s.w(i, j);
      const double pc = s.P(i, j);
      const double qc = s.Q(i, j);
      auto cu = [&](int ii, int jj) { return uc_f(ii, jj); };
      auto cv = [&](int ii, int jj) { return vc_f(ii, jj); };
      const double uc = cu(i, j);
      const double vc = cv(i, j);
      if (j >= 0 && j < ny) {
        const double sw = minmod_slope(s.w(i - 1, j), wc, s.w(i + 1, j), th);
        const double sp = minmod_slope(s.P(i - 1, j), pc, s.P(i + 1, j), th);
        const double sq = minmod_slope(s.Q(i - 1, j), qc, s.Q(i + 1, j), th);
        const double b_e = bathy.b_face_x(i, j);
        const double b_w = bathy.b_face_x(i - 1, j);
        double w_w = wc - 0.5 * sw;
        double w_e = wc + 0.5 * sw;
        correct_pair(wc, w_w, w_e, b_w, b_e);
        const Range ur = range3(cu(i - 1, j), uc, cu(i + 1, j));
        const Range vr = range3(cv(i - 1, j), vc, cv(i + 1, j));
        store(out.east, i, j, w_e, b_e, pc + 0.5 * sp, qc + 0.5 * sq, e4, ur, vr);
        store(out.west, i, j, w_w, b_w, pc - 0.5 * sp, qc - 0.5 * sq, e4, ur, vr);
      }
      if (i >= 0 && i < nx) {
        const double sw = minmod_slope(s.w(i, j - 1), wc, s.w(i, j + 1), th);
        const double sp = minmod_slope(s.P(i, j - 1), pc, s.P(i, j + 1), th);
        const double sq = minmod_slope(s.Q(i, j - 1), qc, s.Q(i, j + 1), th);
        const double b_n = bathy.b_face_y(i, j);
        const double b_s = bathy.b_face_y(i, j - 1);
        double w_s = wc - 0.5 * sw;
        double w_n = wc + 0.5 * sw;
        correct_pair(wc, w_s, w_n, b_s, b_n);
        const Range ur = range3(cu(i, j - 1), uc, cu(i, j + 1));
        const Range vr = range3(cv(i, j - 1), vc, cv(i, j + 1));
        store(out.north, i, j, w_n, b_n, pc + 0.5 * sp, qc + 0.5 * sq, e4, ur, vr);
        store(out.south, i, j, w_s, b_s, pc - 0.5 * sp, qc - 0.5 * sq, e4, ur, vr);
      }
    }
  }
}

InterfaceStates reconstruct(const FieldState& state, const Bathymetry& bathy,
                            const NumericsParams& numerics, const PhysParams& phys) {
  InterfaceStates out(bathy.grid);
  reconstruct(state, bathy, numerics, phys, out);
  return out;
}

namespace {

inline FaceState x_face(const SideValues& sv, int i, int j) {
  return {sv.w(i, j), sv.h(i, j), sv.P(i, j), sv.Q(i, j), sv.u(i, j), sv.v(i, j)};
}

inline FaceState y_face(const SideValues& sv, int i, int j) {
  return {sv.w(i, j), sv.h(i, j), sv.Q(i, j), sv.P(i, j), sv.v(i, j), sv.u(i, j)};
}

}  // namespace

void nlsw_divergence_and_source(const FieldState& s, const Bathymetry& bathy,
                                const NumericsParams& numerics, const PhysParams& phys,
                                Workspace& ws, Rates& out) {
  const Grid& grid = bathy.grid;
  const int nx = grid.nx;
  const int ny = grid.ny;
  const double g = phys.g;
  const double dx = grid.dx;
  const double dy = grid.dy;

  if (ws.fluxes.x_mass.nx() != nx || ws.fluxes.x_mass.ny() != ny) ws = Workspace(grid);
  reconstruct(s, bathy, numerics, phys, ws.faces);

  auto& F = ws.fluxes;
  const auto& faces = ws.faces;
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
  for (int j = -1; j < ny; ++j) {
    for (int i = -1; i < nx; ++i) {
      if (j >= 0) {
        const Flux3 fx = central_upwind_flux(x_face(faces.east, i, j), x_face(faces.west, i + 1, j), g);
        F.x_mass(i, j) = fx.mass;
        F.x_normal(i, j) = fx.normal;
        F.x_tangential(i, j) = fx.tangential;
      }
      if (i >= 0) {
        const Flux3 fy = central_upwind_flux(y_face(faces.north, i, j), y_face(faces.south, i, j + 1), g);
        F.y_mass(i, j) = fy.mass;
        F.y_normal(i, j) = fy.normal;
        F.y_tangential(i, j) = fy.tangential;
      }
    }
  }

  if (out.w.nx() != nx || out.w.ny() != ny) {
    out.w = Field2D(nx, ny, 0);
    out.P = Field2D(nx, ny, 0);
    out.Q = Field2D(nx, ny, 0);
  }
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double b_e = bathy.b_face_x(i, j);
      const double b_w = bathy.b_face_x(i - 1, j);
      const double b_n = bathy.b_face_y(i, j);
      const double b_s = bathy.b_face_y(i, j - 1);
      const double w = s.w(i, j);
      const double hx = std::max(w - 0.5 * (b_e + b_w), 0.0);
      const double hy = std::max(w - 0.5 * (b_n + b_s), 0.0);

      out.w(i, j) = -(F.x_mass(i, j) - F.x_mass(i - 1, j)) / dx - (F.y_mass(i, j) - F.y_mass(i, j - 1)) / dy;
      out.P(i, j) = -(F.x_normal(i, j) - F.x_normal(i - 1, j)) / dx -
                    (F.y_tangential(i, j) - F.y_tangential(i, j - 1)) / dy - g * hx * (b_e - b_w) / dx;
      out.Q(i, j) = -(F.x_tangential(i, j) - F.x_tangential(i - 1, j)) / dx -
                    (F.y_normal(i, j) - F.y_normal(i, j - 1)) / dy - g * hy * (b_n - b_s) / dy;
    }
  }
}

Rates nlsw_divergence_and_source(const FieldState& state, const Bathymetry& bathy,
                                 const NumericsParams& numerics, const PhysParams& phys) {
  Workspace ws(bathy.grid);
  Rates out;
  nlsw_divergence_and_source(state, bathy, numerics, phys, ws, out);
  return out;
}

FrictionTerms friction(double P, double Q, double h, double c_f, double h_eps) {
  if (c_f == 0.0 || (P == 0.0 && Q == 0.0)) return {};
  const double hs = std::max(h, h_eps);
  const double k = c_f * std::sqrt(P * P + Q * Q) / (hs * hs);
  return {k * P, k * Q};
}

}  // namespace bsq::hydro
