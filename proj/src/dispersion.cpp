#include "bsq/dispersion.hpp"

#include <cmath>
#include <string>

#include "bsq/error.hpp"

namespace bsq::dispersion {

DispersiveTerms dispersive_terms(const Field2D& eta, const Bathymetry& bathy, const PhysParams& phys, int i, int j) {
  const double d = bathy.d(i, j);
  if (d <= 0.0) return {};
  const double dx = bathy.grid.dx;
  const double dy = bathy.grid.dy;
  const double dx2 = dx * dx;
  const double dy2 = dy * dy;

  const double e = eta(i, j);
  const double exx = (eta(i + 1, j) - 2.0 * e + eta(i - 1, j)) / dx2;
  const double eyy = (eta(i, j + 1) - 2.0 * e + eta(i, j - 1)) / dy2;
  const double exy = (eta(i + 1, j + 1) - eta(i - 1, j + 1) - eta(i + 1, j - 1) + eta(i - 1, j - 1)) / (4.0 * dx * dy);
  const double exxx = (-eta(i - 2, j) + 2.0 * eta(i - 1, j) - 2.0 * eta(i + 1, j) + eta(i + 2, j)) / (2.0 * dx2 * dx);
  const double eyyy = (-eta(i, j - 2) + 2.0 * eta(i, j - 1) - 2.0 * eta(i, j + 1) + eta(i, j + 2)) / (2.0 * dy2 * dy);

  auto yy = [&](int ii) { return (eta(ii, j + 1) - 2.0 * eta(ii, j) + eta(ii, j - 1)) / dy2; };
  auto xx = [&](int jj) { return (eta(i + 1, jj) - 2.0 * eta(i, jj) + eta(i - 1, jj)) / dx2; };
  const double exyy = (yy(i + 1) - yy(i - 1)) / (2.0 * dx);
  const double exxy = (xx(j + 1) - xx(j - 1)) / (2.0 * dy);

  const double Bg = phys.B * phys.g;
  const double d2 = d * d;
  const double ddx = bathy.d_x(i, j);
  const double ddy = bathy.d_y(i, j);
  return {
      Bg * d2 * d * (exxx + exyy) + Bg * d2 * (ddx * (2.0 * exx + eyy) + ddy * exy),
      Bg * d2 * d * (eyyy + exxy) + Bg * d2 * (ddy * (2.0 * eyy + exx) + ddx * exy),
  };
}

namespace {

void check_finite(const StageSet& s) {
  const int nx = s.E.nx();
  const int ny = s.E.ny();
  const std::pair<const Field2D*, const char*> terms[] = {
      {&s.E, "E"}, {&s.F, "F"}, {&s.G, "G"}, {&s.Fstar, "F*"}, {&s.Gstar, "G*"}};
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      for (const auto& [f, name] : terms) {
        if (!std::isfinite((*f)(i, j))) {
          throw InvalidInput(std::string("non-finite stage term ") + name + " at cell (" + std::to_string(i) +
                             ", " + std::to_string(j) + ")");
        }
      }
    }
  }
}

}  // namespace

void compute_stages(const FieldState& s, const Bathymetry& bathy, const hydro::NumericsParams& numerics,
                    const PhysParams& phys, StageWorkspace& work, StageSet& out) {
  const Grid& grid = bathy.grid;
  const int nx = grid.nx;
  const int ny = grid.ny;
  const double h_eps = hydro::effective_h_eps(bathy, phys);

  if (out.E.nx() != nx || out.E.ny() != ny) out = StageSet(grid);
  if (work.eta.nx() != nx || work.eta.ny() != ny) work = StageWorkspace(grid);

  hydro::nlsw_divergence_and_source(s, bathy, numerics, phys, work.hydro, work.rates);

  // dry land carries no surface, otherwise a beach at rest looks like a step in eta
  auto eta_raw = work.eta.raw();
  auto w_raw = s.w.raw();
  auto b_raw = bathy.b.raw();
  for (std::size_t k = 0; k < eta_raw.size(); ++k)
    eta_raw[k] = w_raw[k] - b_raw[k] > h_eps ? w_raw[k] - bathy.ws : 0.0;

  const auto& r = work.rates;
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double h = std::max(s.w(i, j) - bathy.b(i, j), 0.0);
      const auto fr = hydro::friction(s.P(i, j), s.Q(i, j), h, phys.c_f, h_eps);
      const auto disp = dispersive_terms(work.eta, bathy, phys, i, j);
      out.E(i, j) = r.w(i, j);
      out.F(i, j) = r.P(i, j) - fr.f1 + disp.x;
      out.G(i, j) = r.Q(i, j) - fr.f2 + disp.y;
    }
  }
  cross_terms(s, bathy, phys, out.Fstar, out.Gstar);
  check_finite(out);
}

void cross_terms(const FieldState& s, const Bathymetry& bathy, const PhysParams& phys, Field2D& Fstar,
                 Field2D& Gstar) {
  const Grid& grid = bathy.grid;
  const int nx = grid.nx;
  const int ny = grid.ny;
  const double dx = grid.dx;
  const double dy = grid.dy;
  const double Bp = phys.B + 1.0 / 3.0;
  if (Fstar.nx() != nx || Fstar.ny() != ny) {
    Fstar = Field2D(nx, ny, 0);
    Gstar = Field2D(nx, ny, 0);
  }
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double d = bathy.d(i, j);
      if (d <= 0.0) {
        Fstar(i, j) = 0.0;
        Gstar(i, j) = 0.0;
        continue;
      }
      const double ddx = bathy.d_x(i, j);
      const double ddy = bathy.d_y(i, j);
      const double Qx = (s.Q(i + 1, j) - s.Q(i - 1, j)) / (2.0 * dx);
      const double Qy = (s.Q(i, j + 1) - s.Q(i, j - 1)) / (2.0 * dy);
      const double Qxy = (s.Q(i + 1, j + 1) - s.Q(i - 1, j + 1) - s.Q(i + 1, j - 1) + s.Q(i - 1, j - 1)) / (4.0 * dx * dy);
      const double Px = (s.P(i + 1, j) - s.P(i - 1, j)) / (2.0 * dx);
      const double Py = (s.P(i, j + 1) - s.P(i, j - 1)) / (2.0 * dy);
      const double Pxy = (s.P(i + 1, j + 1) - s.P(i - 1, j + 1) - s.P(i + 1, j - 1) + s.P(i - 1, j - 1)) / (4.0 * dx * dy);
      Fstar(i, j) = d * ddx * Qy / 6.0 + d * ddy * Qx / 6.0 + Bp * d * d * Qxy;
      Gstar(i, j) = d * ddx * Py / 6.0 + d * ddy * Px / 6.0 + Bp * d * d * Pxy;
    }
  }
}

StageSet compute_stages(const FieldState& state, const Bathymetry& bathy, const hydro::NumericsParams& numerics,
                        const PhysParams& phys) {
  StageWorkspace work(bathy.grid);
  StageSet out(bathy.grid);
  compute_stages(state, bathy, numerics, phys, work, out);
  return out;
}

void compute_Ustar_Vstar(const FieldState& s, const Bathymetry& bathy, const PhysParams& phys, ImplicitVariables& out) {
  const Grid& grid = bathy.grid;
  const int nx = grid.nx;
  const int ny = grid.ny;
  const double dx = grid.dx;
  const double dy = grid.dy;
  const double Bp = phys.B + 1.0 / 3.0;
  if (out.Ustar.nx() != nx || out.Ustar.ny() != ny) {
    out.Ustar = Field2D(nx, ny, 0);
    out.Vstar = Field2D(nx, ny, 0);
  }
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double d = bathy.d(i, j);
      const double p = s.P(i, j);
      const double q = s.Q(i, j);
      if (d <= 0.0) {
        out.Ustar(i, j) = p;
        out.Vstar(i, j) = q;
        continue;
      }
      const double Px = (s.P(i + 1, j) - s.P(i - 1, j)) / (2.0 * dx);
      const double Pxx = (s.P(i + 1, j) - 2.0 * p + s.P(i - 1, j)) / (dx * dx);
      const double Qy = (s.Q(i, j + 1) - s.Q(i, j - 1)) / (2.0 * dy);
      const double Qyy = (s.Q(i, j + 1) - 2.0 * q + s.Q(i, j - 1)) / (dy * dy);
      out.Ustar(i, j) = p - d * bathy.d_x(i, j) * Px / 3.0 - Bp * d * d * Pxx;
      out.Vstar(i, j) = q - d * bathy.d_y(i, j) * Qy / 3.0 - Bp * d * d * Qyy;
    }
  }
}

ImplicitVariables compute_Ustar_Vstar(const FieldState& state, const Bathymetry& bathy, const PhysParams& phys) {
  ImplicitVariables out;
  compute_Ustar_Vstar(state, bathy, phys, out);
  return out;
}

}  // namespace bsq::dispersion
