#include "bsq/implicit.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "bsq/error.hpp"

namespace bsq::implicit {

namespace {

void check_shape(const TridiagonalSystem& sys) {
  const std::size_t n = sys.b.size();
  if (n == 0) throw InvalidInput("empty tridiagonal system");
  if (sys.a.size() != n || sys.c.size() != n || sys.rhs.size() != n) {
    throw InvalidInput("tridiagonal arrays differ in length");
  }
}

}  // namespace

void thomas_solve(const TridiagonalSystem& sys, std::vector<double>& x, std::vector<double>& cp) {
  check_shape(sys);
  const std::size_t n = sys.size();
  x.resize(n);
  cp.resize(n);
  double piv = sys.b[0];
  if (piv == 0.0) throw SingularSystem("zero pivot at row 0");
  cp[0] = sys.c[0] / piv;
  x[0] = sys.rhs[0] / piv;
  for (std::size_t k = 1; k < n; ++k) {
    piv = sys.b[k] - sys.a[k] * cp[k - 1];
    if (piv == 0.0 || !std::isfinite(piv)) throw SingularSystem("zero pivot at row " + std::to_string(k));
    cp[k] = (k + 1 < n) ? sys.c[k] / piv : 0.0;
    x[k] = (sys.rhs[k] - sys.a[k] * x[k - 1]) / piv;
  }
  for (std::size_t k = n - 1; k-- > 0;) x[k] -= cp[k] * x[k + 1];
}

std::vector<double> thomas_solve(const TridiagonalSystem& sys) {
  std::vector<double> x, scratch;
  thomas_solve(sys, x, scratch);
  return x;
}

std::vector<double> cyclic_reduction_solve(const TridiagonalSystem& sys) {
  check_shape(sys);
  const std::size_t n = sys.size();
  if (n == 1) {
    if (sys.b[0] == 0.0) throw SingularSystem("zero pivot in 1x1 system");
    return {sys.rhs[0] / sys.b[0]};
  }
  // Pad with identity rows to a power of two; the last level is a 2x2 solve.
  const std::size_t N = std::bit_ceil(n);
  std::vector<double> a(N, 0.0), b(N, 1.0), c(N, 0.0), d(N, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    a[k] = k > 0 ? sys.a[k] : 0.0;
    b[k] = sys.b[k];
    c[k] = k + 1 < n ? sys.c[k] : 0.0;
    d[k] = sys.rhs[k];
  }

  auto pivot = [&](std::size_t k) {
    if (b[k] == 0.0 || !std::isfinite(b[k])) {
      throw SingularSystem("zero reduced pivot at row " + std::to_string(k));
    }
    return b[k];
  };

  // Forward reduction: at each level the equations at odd multiples of the
  // stride absorb their neighbours, halving the active unknowns.
  std::size_t half = 1;
  for (; 2 * half < N; half *= 2) {
    const std::size_t step = 2 * half;
    for (std::size_t i = step - 1; i < N; i += step) {
      const std::size_t l = i - half;
      const double alpha = -a[i] / pivot(l);
      double gamma = 0.0;
      double a_new = alpha * a[l];
      double c_new = 0.0;
      double b_new = b[i] + alpha * c[l];
      double d_new = d[i] + alpha * d[l];
      if (i + half < N) {
        const std::size_t r = i + half;
        gamma = -c[i] / pivot(r);
        c_new = gamma * c[r];
        b_new += gamma * a[r];
        d_new += gamma * d[r];
      }
      a[i] = a_new;
      b[i] = b_new;
      c[i] = c_new;
      d[i] = d_new;
    }
  }

  std::vector<double> x(N, 0.0);
  // Two remaining unknowns at half-1 and N-1, coupled through c and a.
  {
    const std::size_t i1 = half - 1;
    const std::size_t i2 = N - 1;
    const double det = b[i1] * b[i2] - c[i1] * a[i2];
    if (det == 0.0 || !std::isfinite(det)) throw SingularSystem("zero pivot in reduced 2x2 system");
    x[i1] = (d[i1] * b[i2] - c[i1] * d[i2]) / det;
    x[i2] = (b[i1] * d[i2] - a[i2] * d[i1]) / det;
  }

  // Back substitution, coarse to fine.
  for (half /= 2; half >= 1; half /= 2) {
    const std::size_t step = 2 * half;
    for (std::size_t i = half - 1; i < N; i += step) {
      double s = d[i];
      if (i >= half) s -= a[i] * x[i - half];
      if (i + half < N) s -= c[i] * x[i + half];
      x[i] = s / pivot(i);
    }
    if (half == 1) break;
  }
  x.resize(n);
  return x;
}

std::vector<double> solve(const TridiagonalSystem& sys, Solver solver) {
  return solver == Solver::Thomas ? thomas_solve(sys) : cyclic_reduction_solve(sys);
}

RowCoefficients row_coefficients(double d, double d_slope, double spacing, double B_disp) {
  const double first = d * d_slope / (6.0 * spacing);
  const double second = (B_disp + 1.0 / 3.0) * d * d / (spacing * spacing);
  return {first - second, 1.0 + 2.0 * second, -first - second};
}

LineCoefficients assemble(const Bathymetry& bathy, Direction dir, const PhysParams& phys) {
  const Grid& g = bathy.grid;
  LineCoefficients out{Field2D(g.nx, g.ny, 0), Field2D(g.nx, g.ny, 0), Field2D(g.nx, g.ny, 0)};
  const double spacing = dir == Direction::X ? g.dx : g.dy;
  const Field2D& slope = dir == Direction::X ? bathy.d_x : bathy.d_y;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const auto rc = row_coefficients(bathy.d(i, j), slope(i, j), spacing, phys.B);
      out.A(i, j) = rc.A;
      out.B(i, j) = rc.B;
      out.C(i, j) = rc.C;
    }
  }
  return out;
}

std::size_t non_dominant_rows(const LineCoefficients& co) {
  std::size_t count = 0;
  for (int j = 0; j < co.B.ny(); ++j) {
    for (int i = 0; i < co.B.nx(); ++i) {
      if (!(std::abs(co.B(i, j)) > std::abs(co.A(i, j)) + std::abs(co.C(i, j)))) ++count;
    }
  }
  return count;
}

MomentumOperator assemble_operator(const Bathymetry& bathy, const PhysParams& phys) {
  return {assemble(bathy, Direction::X, phys), assemble(bathy, Direction::Y, phys)};
}

namespace {

// Loads one line into `sys`, folds the ghost closures into the end rows,
// solves, and hands back the solution.
template <typename Get, typename Put>
void solve_line(int n, const LineCoefficients& co, Get&& at, const Field2D& rhs_field, GhostClosure lo,
                GhostClosure hi, Solver solver, TridiagonalSystem& sys, std::vector<double>& x,
                std::vector<double>& scratch, Put&& put, const std::string& label) {
  sys.a.resize(n);
  sys.b.resize(n);
  sys.c.resize(n);
  sys.rhs.resize(n);
  for (int k = 0; k < n; ++k) {
    const auto [i, j] = at(k);
    sys.a[k] = co.A(i, j);
    sys.b[k] = co.B(i, j);
    sys.c[k] = co.C(i, j);
    sys.rhs[k] = rhs_field(i, j);
  }
  // Row 0: A * ghost = A * (mirror * x0 + value).
  sys.b[0] += sys.a[0] * lo.mirror;
  sys.rhs[0] -= sys.a[0] * lo.value;
  sys.b[n - 1] += sys.c[n - 1] * hi.mirror;
  sys.rhs[n - 1] -= sys.c[n - 1] * hi.value;
  sys.a[0] = 0.0;
  sys.c[n - 1] = 0.0;
  try {
    if (solver == Solver::Thomas) {
      thomas_solve(sys, x, scratch);
    } else {
      x = cyclic_reduction_solve(sys);
    }
  } catch (const SingularSystem& e) {
    throw SingularSystem(label + ": " + e.what());
  }
  for (int k = 0; k < n; ++k) {
    const auto [i, j] = at(k);
    put(i, j, x[k]);
  }
}

}  // namespace

void solve_momentum(const Field2D& Ustar, const Field2D& Vstar, const LineClosures& closures,
                    const MomentumOperator& op, Solver solver, Field2D& P, Field2D& Q) {
  const int nx = op.x.B.nx();
  const int ny = op.x.B.ny();
  if (closures.west.size() != static_cast<std::size_t>(ny) || closures.east.size() != static_cast<std::size_t>(ny) ||
      closures.south.size() != static_cast<std::size_t>(nx) || closures.north.size() != static_cast<std::size_t>(nx)) {
    throw InvalidInput("line closures do not match the grid");
  }

#if defined(_OPENMP)
#pragma omp parallel
#endif
  {
    TridiagonalSystem sys;
    std::vector<double> x, scratch;
#if defined(_OPENMP)
#pragma omp for schedule(static)
#endif
    for (int j = 0; j < ny; ++j) {
      solve_line(
          nx, op.x, [j](int k) { return std::pair{k, j}; }, Ustar, closures.west[j], closures.east[j], solver, sys,
          x, scratch, [&P](int i, int jj, double v) { P(i, jj) = v; }, "row " + std::to_string(j));
    }
#if defined(_OPENMP)
#pragma omp for schedule(static)
#endif
    for (int i = 0; i < nx; ++i) {
      solve_line(
          ny, op.y, [i](int k) { return std::pair{i, k}; }, Vstar, closures.south[i], closures.north[i], solver, sys,
          x, scratch, [&Q](int ii, int j, double v) { Q(ii, j) = v; }, "column " + std::to_string(i));
    }
  }
}

}  // namespace bsq::implicit
