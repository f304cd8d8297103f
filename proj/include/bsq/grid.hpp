#pragma once

// Ghost-padded uniform Cartesian grid, bathymetry and field storage.
//
// Cells are indexed (i, j) with i in [0, nx) along x and j in [0, ny) along
// y. Storage includes a frame of `ghost` cells on every side, so valid
// indices run from -ghost to n + ghost - 1. Arrays are row-major in j.

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace bsq {

inline constexpr int kGhost = 2;

struct Grid {
  int nx = 0;
  int ny = 0;
  double dx = 0.0;
  double dy = 0.0;
  double x0 = 0.0;  // west edge of cell 0
  double y0 = 0.0;  // south edge of cell 0

  /// Throws InvalidInput unless nx, ny >= 5 and dx, dy > 0.
  void validate() const;

  double x(int i) const { return x0 + (i + 0.5) * dx; }
  double y(int j) const { return y0 + (j + 0.5) * dy; }
  double length_x() const { return nx * dx; }
  double length_y() const { return ny * dy; }
  std::size_t cells() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
};

/// Dense 2-D array with an optional ghost frame.
class Field2D {
 public:
  Field2D() = default;
  Field2D(int nx, int ny, int ghost = kGhost, double fill = 0.0)
      : nx_(nx), ny_(ny), ghost_(ghost), stride_(nx + 2 * ghost),
        data_(static_cast<std::size_t>(nx + 2 * ghost) * static_cast<std::size_t>(ny + 2 * ghost), fill) {}

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int ghost() const { return ghost_; }
  int stride() const { return stride_; }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j + ghost_) * static_cast<std::size_t>(stride_) +
           static_cast<std::size_t>(i + ghost_);
  }
  double& operator()(int i, int j) { return data_[index(i, j)]; }
  double operator()(int i, int j) const { return data_[index(i, j)]; }

  std::span<double> raw() { return data_; }
  std::span<const double> raw() const { return data_; }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

  /// Largest |value| over the interior; NaN if any interior value is NaN.
  double max_abs_interior() const;

  bool operator==(const Field2D&) const = default;

 private:
  int nx_ = 0;
  int ny_ = 0;
  int ghost_ = 0;
  int stride_ = 0;
  std::vector<double> data_;
};

/// Fills the ghost frame by even reflection about each side
/// (f(-1) = f(0), f(-2) = f(1)). West/east first, then south/north over
/// the full padded width so corners are covered.
void extend_even(Field2D& f);

struct PhysParams {
  double g = 9.81;
  double B = 1.0 / 15.0;  // dispersion calibration coefficient
  double c_f = 0.0;       // quadratic bottom friction factor
  double h_eps = 0.0;     // depth floor for divisions; <= 0 selects the default
  double h_dry = 0.0;     // momentum in shallower cells is damped; <= 0 selects 1e-3 * max depth

  void validate() const;
};

/// Bed, still-water depth and its precomputed derivatives. Immutable once
/// built.
struct Bathymetry {
  Grid grid;
  double ws = 0.0;  // still-water elevation
  Field2D b_input;  // bed as supplied, cell centers
  Field2D b;        // cell bed used by the solver: mean of the four corners
  Field2D d;        // max(ws - b, 0)
  Field2D d_x;      // central difference of d
  Field2D d_y;
  Field2D b_face_x;  // bed at the east face of cell (i, j), mean of its two corners
  Field2D b_face_y;  // bed at the north face of cell (i, j)
  double max_depth = 0.0;

  /// Default depth floor, 1e-6 * max(1, max d).
  double default_h_eps() const;
  /// Default thin-film depth, 1e-3 * max d.
  double default_h_dry() const;
};

/// Builds bathymetry from interior bed values (row-major, ny rows of nx).
/// Corner values average the four neighbouring centers; the solver's cell
/// bed is the mean of its corners, which keeps dry cells flat to the
/// reconstruction.
Bathymetry build_bathymetry(const Grid& grid, std::span<const double> bed, double ws);

/// Same, from a field whose interior holds the bed.
Bathymetry build_bathymetry(const Grid& grid, const Field2D& bed, double ws);

struct FieldState {
  Field2D w;  // surface elevation from datum
  Field2D P;  // x flux
  Field2D Q;  // y flux

  FieldState() = default;
  explicit FieldState(const Grid& g)
      : w(g.nx, g.ny), P(g.nx, g.ny), Q(g.nx, g.ny) {}
};

/// Still water: w = max(ws, b), P = Q = 0.
FieldState still_water(const Bathymetry& bathy);

/// Throws InvalidInput naming the first interior cell where h = w - b < 0
/// (beyond `tolerance`) or any value is non-finite.
void check_state(const FieldState& s, const Bathymetry& bathy, double tolerance = 0.0);

/// Interior values of an ESRI ASCII grid. Row 0 of `values` is the
/// southernmost row (file rows are written north to south).
struct AsciiGrid {
  int ncols = 0;
  int nrows = 0;
  double xllcorner = 0.0;
  double yllcorner = 0.0;
  double cellsize = 0.0;
  double nodata = -9999.0;
  std::vector<double> values;  // row-major, south row first

  double at(int col, int row) const { return values[static_cast<std::size_t>(row) * ncols + col]; }
};

AsciiGrid load_ascii_grid(const std::filesystem::path& path);
AsciiGrid parse_ascii_grid(const std::string& text);

/// Serializes with 17 significant digits.
std::string format_ascii_grid(const AsciiGrid& g);

/// Interior of `f` as an ASCII grid positioned on `grid` (requires dx == dy).
AsciiGrid to_ascii_grid(const Field2D& f, const Grid& grid);

/// Writes to a temporary file in the same directory and renames it over
/// `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace bsq
