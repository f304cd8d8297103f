#pragma once

// Tridiagonal systems recovering the fluxes P, Q from the implicit momentum
// variables U*, V*: one system per grid row (for P) and per column (for Q).

#include <cstddef>
#include <vector>

#include "bsq/grid.hpp"

namespace bsq::implicit {

/// a[k] x[k-1] + b[k] x[k] + c[k] x[k+1] = rhs[k]. a[0] and c[n-1] are
/// ignored.
struct TridiagonalSystem {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;
  std::vector<double> rhs;

  std::size_t size() const { return b.size(); }
  void resize(std::size_t n) {
    a.assign(n, 0.0);
    b.assign(n, 1.0);
    c.assign(n, 0.0);
    rhs.assign(n, 0.0);
  }
};

enum class Solver { Thomas, CyclicReduction };

std::vector<double> thomas_solve(const TridiagonalSystem& sys);
std::vector<double> cyclic_reduction_solve(const TridiagonalSystem& sys);
std::vector<double> solve(const TridiagonalSystem& sys, Solver solver);

/// Allocation-free variants; `x` is resized to the system size. Thomas
/// needs one scratch vector, cyclic reduction four.
void thomas_solve(const TridiagonalSystem& sys, std::vector<double>& x, std::vector<double>& scratch);

enum class Direction { X, Y };

/// Coefficients A, B, C of the discrete operator
///   P - (1/3) d d_a P_a - (B + 1/3) d^2 P_aa
/// for every interior cell, along direction a.
struct LineCoefficients {
  Field2D A, B, C;
};

LineCoefficients assemble(const Bathymetry& bathy, Direction dir, const PhysParams& phys);

/// Coefficients at one cell given its depth, slope, spacing.
struct RowCoefficients {
  double A, B, C;
};
RowCoefficients row_coefficients(double d, double d_slope, double spacing, double B_disp);

/// Count of interior cells where the row is not strictly diagonally dominant.
std::size_t non_dominant_rows(const LineCoefficients& coeffs);

/// Closure of a line end at the first ghost cell:
///   ghost = mirror * (adjacent interior value) + value.
/// Walls use mirror = -1 for the normal flux; wavemakers prescribe `value`.
struct GhostClosure {
  double mirror = 0.0;
  double value = 0.0;
};

struct LineClosures {
  std::vector<GhostClosure> west, east;    // per row (P systems)
  std::vector<GhostClosure> south, north;  // per column (Q systems)
};

struct MomentumOperator {
  LineCoefficients x;
  LineCoefficients y;
};

MomentumOperator assemble_operator(const Bathymetry& bathy, const PhysParams& phys);

/// Solves every row system for P and every column system for Q. Writes the
/// interior of P and Q; ghosts are untouched.
void solve_momentum(const Field2D& Ustar, const Field2D& Vstar, const LineClosures& closures,
                    const MomentumOperator& op, Solver solver, Field2D& P, Field2D& Q);

}  // namespace bsq::implicit
