#pragma once

// Stage functions of the rearranged extended Boussinesq system:
//
//   w_t  = E
//   U*_t = F + (F*)_t
//   V*_t = G + (G*)_t
//
// E, F, G combine the finite-volume shallow-water rates with friction and
// the dispersive terms, which are discretized with central differences on
// cell centers. F* and G* collect the mixed-derivative flux terms whose
// time derivative is extrapolated by the stepper.

#include <array>
#include <cstddef>

#include "bsq/grid.hpp"
#include "bsq/hydro.hpp"

namespace bsq::dispersion {

/// One time level of stage values. Interior arrays (no ghost frame).
struct StageSet {
  Field2D E, F, G, Fstar, Gstar;
  double taken_at = 0.0;  // time of the level
  double dt_after = 0.0;  // step taken from this level

  StageSet() = default;
  explicit StageSet(const Grid& g)
      : E(g.nx, g.ny, 0), F(g.nx, g.ny, 0), G(g.nx, g.ny, 0), Fstar(g.nx, g.ny, 0), Gstar(g.nx, g.ny, 0) {}
};

/// The three most recent stage levels, newest first.
class StageHistory {
 public:
  StageHistory() = default;
  explicit StageHistory(const Grid& g) : slots_{StageSet(g), StageSet(g), StageSet(g)} {}

  std::size_t size() const { return count_; }
  void clear() { count_ = 0; }

  /// Level k back from the newest (0 = newest).
  const StageSet& operator[](std::size_t k) const { return slots_[(head_ + k) % 3]; }
  StageSet& operator[](std::size_t k) { return slots_[(head_ + k) % 3]; }

  /// Rotates the ring and returns the slot that becomes level 0; its
  /// contents are stale until overwritten.
  StageSet& push() {
    head_ = (head_ + 2) % 3;
    if (count_ < 3) ++count_;
    return slots_[head_];
  }

 private:
  std::array<StageSet, 3> slots_;
  std::size_t head_ = 0;
  std::size_t count_ = 0;
};

/// Reusable buffers for compute_stages.
struct StageWorkspace {
  hydro::Workspace hydro;
  hydro::Rates rates;
  Field2D eta;
  StageWorkspace() = default;
  explicit StageWorkspace(const Grid& g) : hydro(g), eta(g.nx, g.ny) {}
};

/// Evaluates E, F, G, F*, G* on the current state. Ghost cells must be
/// populated. Throws InvalidInput naming the first non-finite cell and term.
void compute_stages(const FieldState& state, const Bathymetry& bathy, const hydro::NumericsParams& numerics,
                    const PhysParams& phys, StageWorkspace& work, StageSet& out);
StageSet compute_stages(const FieldState& state, const Bathymetry& bathy,
                        const hydro::NumericsParams& numerics, const PhysParams& phys);

/// F* and G* alone (ghosts of P, Q populated). Zero where d = 0.
void cross_terms(const FieldState& state, const Bathymetry& bathy, const PhysParams& phys, Field2D& Fstar,
                 Field2D& Gstar);

/// Dispersive contribution to the x and y momentum stages only (no flux or
/// friction), evaluated from the surface field `eta` (ghosts populated).
struct DispersiveTerms {
  double x = 0.0;
  double y = 0.0;
};
DispersiveTerms dispersive_terms(const Field2D& eta, const Bathymetry& bathy, const PhysParams& phys, int i, int j);

/// U* = P - (1/3) d d_x P_x - (B + 1/3) d^2 P_xx and the y analogue, by
/// central differences (the exact operator the tridiagonal solve inverts).
struct ImplicitVariables {
  Field2D Ustar, Vstar;
};
void compute_Ustar_Vstar(const FieldState& state, const Bathymetry& bathy, const PhysParams& phys,
                         ImplicitVariables& out);
ImplicitVariables compute_Ustar_Vstar(const FieldState& state, const Bathymetry& bathy, const PhysParams& phys);

}  // namespace bsq::dispersion
