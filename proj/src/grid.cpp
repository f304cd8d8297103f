#include "bsq/grid.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "bsq/error.hpp"

namespace bsq {

void Grid::validate() const {
  if (nx < 5 || ny < 5) {
    throw InvalidInput("grid needs at least 5 cells per direction, got " + std::to_string(nx) + "x" +
                       std::to_string(ny));
  }
  if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy)) {
    throw InvalidInput("cell sizes must be positive and finite");
  }
}

double Field2D::max_abs_interior() const {
  double m = 0.0;
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      const double v = (*this)(i, j);
      if (std::isnan(v)) return v;
      m = std::max(m, std::abs(v));
    }
  }
  return m;
}

void extend_even(Field2D& f) {
  const int g = f.ghost();
  const int nx = f.nx();
  const int ny = f.ny();
  for (int j = 0; j < ny; ++j) {
    for (int k = 1; k <= g; ++k) {
      f(-k, j) = f(k - 1, j);
      f(nx - 1 + k, j) = f(nx - k, j);
    }
  }
  for (int i = -g; i < nx + g; ++i) {
    for (int k = 1; k <= g; ++k) {
      f(i, -k) = f(i, k - 1);
      f(i, ny - 1 + k) = f(i, ny - k);
    }
  }
}

void PhysParams::validate() const {
  if (!(g > 0.0) || !std::isfinite(g)) throw InvalidInput("gravity must be positive");
  if (!std::isfinite(B)) throw InvalidInput("dispersion coefficient must be finite");
  if (!(c_f >= 0.0) || !std::isfinite(c_f)) throw InvalidInput("friction factor must be >= 0");
  if (!std::isfinite(h_eps)) throw InvalidInput("depth floor must be finite");
  if (!std::isfinite(h_dry)) throw InvalidInput("thin-film depth must be finite");
}

double Bathymetry::default_h_eps() const { return 1e-6 * std::max(1.0, max_depth); }
double Bathymetry::default_h_dry() const { return 1e-3 * max_depth; }

Bathymetry build_bathymetry(const Grid& grid, const Field2D& bed, double ws) {
  grid.validate();
  if (bed.nx() != grid.nx || bed.ny() != grid.ny) throw InvalidInput("bed field does not match grid");
  if (!std::isfinite(ws)) throw InvalidInput("still-water elevation must be finite");

  Bathymetry out;
  out.grid = grid;
  out.ws = ws;
  const int nx = grid.nx;
  const int ny = grid.ny;
  const int g = kGhost;

  // Input sampled at cell centers, extended one cell wider than the
  // solver frame so corners and faces exist around every ghost cell.
  out.b_input = Field2D(nx, ny);
  Field2D src(nx, ny, g + 2);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double v = bed(i, j);
      if (!std::isfinite(v)) {
        throw InvalidInput("non-finite bed elevation at cell (" + std::to_string(i) + ", " +
                           std::to_string(j) + ")");
      }
      out.b_input(i, j) = v;
      src(i, j) = v;
    }
  }
  extend_even(out.b_input);
  extend_even(src);

  // Corner (i + 1/2, j + 1/2) averages the four surrounding centers. Faces
  // average two corners and the cell bed averages the four corners, so the
  // cell bed is exactly the midpoint of its opposite faces in both
  // directions.
  const int gc = g + 1;
  Field2D corner(nx, ny, gc + 1);
  for (int j = -gc - 1; j < ny + gc; ++j) {
    for (int i = -gc - 1; i < nx + gc; ++i) {
      corner(i, j) = 0.25 * (src(i, j) + src(i + 1, j) + src(i, j + 1) + src(i + 1, j + 1));
    }
  }
  out.b_face_x = Field2D(nx, ny, gc);
  out.b_face_y = Field2D(nx, ny, gc);
  for (int j = -gc; j < ny + gc; ++j) {
    for (int i = -gc; i < nx + gc; ++i) {
      out.b_face_x(i, j) = 0.5 * (corner(i, j) + corner(i, j - 1));
      out.b_face_y(i, j) = 0.5 * (corner(i, j) + corner(i - 1, j));
    }
  }
  out.b = Field2D(nx, ny);
  for (int j = -g; j < ny + g; ++j) {
    for (int i = -g; i < nx + g; ++i) {
      out.b(i, j) = 0.25 * (corner(i, j) + corner(i - 1, j) + corner(i, j - 1) + corner(i - 1, j - 1));
    }
  }

  out.d = Field2D(nx, ny);
  for (int j = -g; j < ny + g; ++j) {
    for (int i = -g; i < nx + g; ++i) out.d(i, j) = std::max(ws - out.b(i, j), 0.0);
  }
  out.max_depth = 0.0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) out.max_depth = std::max(out.max_depth, out.d(i, j));
  }

  out.d_x = Field2D(nx, ny);
  out.d_y = Field2D(nx, ny);
  for (int j = -g; j < ny + g; ++j) {
    for (int i = -g + 1; i < nx + g - 1; ++i) {
      out.d_x(i, j) = (out.d(i + 1, j) - out.d(i - 1, j)) / (2.0 * grid.dx);
    }
  }
  for (int j = -g + 1; j < ny + g - 1; ++j) {
    for (int i = -g; i < nx + g; ++i) {
      out.d_y(i, j) = (out.d(i, j + 1) - out.d(i, j - 1)) / (2.0 * grid.dy);
    }
  }
  return out;
}

Bathymetry build_bathymetry(const Grid& grid, std::span<const double> bed, double ws) {
  grid.validate();
  if (bed.size() != grid.cells()) {
    throw InvalidInput("bed has " + std::to_string(bed.size()) + " values, grid has " +
                       std::to_string(grid.cells()) + " cells");
  }
  Field2D f(grid.nx, grid.ny);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) f(i, j) = bed[static_cast<std::size_t>(j) * grid.nx + i];
  }
  return build_bathymetry(grid, f, ws);
}

FieldState still_water(const Bathymetry& bathy) {
  FieldState s(bathy.grid);
  for (int j = -kGhost; j < bathy.grid.ny + kGhost; ++j) {
    for (int i = -kGhost; i < bathy.grid.nx + kGhost; ++i) s.w(i, j) = std::max(bathy.ws, bathy.b(i, j));
  }
  return s;
}

void check_state(const FieldState& s, const Bathymetry& bathy, double tolerance) {
  const auto& grid = bathy.grid;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const double w = s.w(i, j);
      const double p = s.P(i, j);
      const double q = s.Q(i, j);
      const std::string cell = "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
      if (!std::isfinite(w) || !std::isfinite(p) || !std::isfinite(q)) {
        throw InvalidInput("non-finite state at cell " + cell);
      }
      if (w - bathy.b(i, j) < -tolerance) {
        throw InvalidInput("negative depth " + std::to_string(w - bathy.b(i, j)) + " at cell " + cell);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// ESRI ASCII grid

namespace {

double parse_number(const std::string& tok, const std::string& what) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ParseError("cannot parse " + what + " value '" + tok + "'");
  return v;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

AsciiGrid parse_ascii_grid(const std::string& text) {
  std::istringstream in(text);
  AsciiGrid g;
  bool have[6] = {false, false, false, false, false, false};
  const char* keys[6] = {"ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value"};

  std::string line;
  int header_lines = 0;
  while (header_lines < 6) {
    if (!std::getline(in, line)) throw ParseError("ASCII grid header truncated");
    std::istringstream ls(line);
    std::string key, val, extra;
    if (!(ls >> key)) continue;
    key = lower(key);
    int idx = -1;
    for (int k = 0; k < 6; ++k) {
      if (key == keys[k]) idx = k;
    }
    if (key == "xllcenter") idx = 2;
    if (key == "yllcenter") idx = 3;
    if (idx < 0) throw ParseError("unexpected ASCII grid header key '" + key + "'");
    if (!(ls >> val) || (ls >> extra)) throw ParseError("malformed header line for '" + key + "'");
    if (have[idx]) throw ParseError("duplicate header key '" + key + "'");
    have[idx] = true;
    ++header_lines;
    const double v = parse_number(val, key);
    switch (idx) {
      case 0: g.ncols = static_cast<int>(v); if (v != g.ncols || v < 1) throw ParseError("bad ncols"); break;
      case 1: g.nrows = static_cast<int>(v); if (v != g.nrows || v < 1) throw ParseError("bad nrows"); break;
      case 2: g.xllcorner = v; break;
      case 3: g.yllcorner = v; break;
      case 4: g.cellsize = v; if (!(v > 0)) throw ParseError("cellsize must be positive"); break;
      case 5: g.nodata = v; break;
    }
  }
  for (int k = 0; k < 6; ++k) {
    if (!have[k]) throw ParseError(std::string("missing header key '") + keys[k] + "'");
  }

  g.values.assign(static_cast<std::size_t>(g.ncols) * g.nrows, 0.0);
  int file_row = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) row.push_back(parse_number(tok, "cell"));
    if (row.empty()) continue;
    if (file_row >= g.nrows) throw ParseError("more data rows than nrows=" + std::to_string(g.nrows));
    if (static_cast<int>(row.size()) != g.ncols) {
      throw ParseError("row " + std::to_string(file_row) + " has " + std::to_string(row.size()) +
                       " values, expected ncols=" + std::to_string(g.ncols));
    }
    const int row_south = g.nrows - 1 - file_row;
    for (int c = 0; c < g.ncols; ++c) {
      if (row[c] == g.nodata) {
        throw ParseError("NODATA value at row " + std::to_string(file_row) + ", column " + std::to_string(c));
      }
      g.values[static_cast<std::size_t>(row_south) * g.ncols + c] = row[c];
    }
    ++file_row;
  }
  if (file_row != g.nrows) {
    throw ParseError("found " + std::to_string(file_row) + " data rows, expected nrows=" + std::to_string(g.nrows));
  }
  return g;
}

AsciiGrid load_ascii_grid(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open ASCII grid '" + path.string() + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_ascii_grid(buf.str());
}

std::string format_ascii_grid(const AsciiGrid& g) {
  std::string out;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out += "ncols " + std::to_string(g.ncols) + "\n";
  out += "nrows " + std::to_string(g.nrows) + "\n";
  out += "xllcorner " + num(g.xllcorner) + "\n";
  out += "yllcorner " + num(g.yllcorner) + "\n";
  out += "cellsize " + num(g.cellsize) + "\n";
  out += "NODATA_value " + num(g.nodata) + "\n";
  for (int r = g.nrows - 1; r >= 0; --r) {
    for (int c = 0; c < g.ncols; ++c) {
      if (c) out += ' ';
      out += num(g.at(c, r));
    }
    out += '\n';
  }
  return out;
}

AsciiGrid to_ascii_grid(const Field2D& f, const Grid& grid) {
  AsciiGrid g;
  g.ncols = grid.nx;
  g.nrows = grid.ny;
  g.xllcorner = grid.x0;
  g.yllcorner = grid.y0;
  g.cellsize = grid.dx;
  g.values.resize(grid.cells());
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) g.values[static_cast<std::size_t>(j) * grid.nx + i] = f(i, j);
  }
  return g;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open '" + tmp.string() + "' for writing");
    f << contents;
    f.flush();
    if (!f) throw Error("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace bsq
