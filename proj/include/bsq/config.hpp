#pragma once

// Run configuration: a JSON document parsed into validated structs. Every
// rejection carries the key path of the offending entry.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bsq/boundary.hpp"
#include "bsq/grid.hpp"
#include "bsq/scenario.hpp"
#include "bsq/stepper.hpp"

namespace bsq::config {

struct SineParams {
  double amplitude = 0.0;
  double period = 0.0;
  double phase = 0.0;
  double ramp = 0.0;
};

struct IrregularParams {
  boundary::SpectrumSpec spectrum;
  double ramp = 0.0;
};

// Wavemaker components depend on the depth at the side, so the boundary
// block keeps raw parameters until the bathymetry exists.
using SideConfig = std::variant<boundary::Wall, boundary::Sponge, SineParams, IrregularParams>;

struct HumpParams {
  double depth = 1.0;
  double height = 0.5;
  double width = 1.0;
  double cx = 0.0;
  double cy = 0.0;
};

struct FileParams {
  std::filesystem::path path;
  double ws = 0.0;
};

struct DamBreakParams {
  double x = 0.0;
  double w_left = 0.0;
};

enum class BathyKind { ConicalIsland, Hamm, GaussianHump, Flat, File };
enum class InitialKind { Still, Solitary, DamBreak };

struct ScenarioConfig {
  BathyKind bathymetry = BathyKind::Flat;
  scenario::ConicalIsland island;
  HumpParams hump;
  double flat_depth = 1.0;
  FileParams file;

  InitialKind initial = InitialKind::Still;
  scenario::SolitaryWaveSpec solitary;
  DamBreakParams dam;
};

struct RunupConfig {
  scenario::RunupSpec spec;
  int n_azimuths = 72;
  double reference_radius = 0.0;  // 0 selects the island shoreline radius when available
};

struct AveragesConfig {
  double t0 = 0.0;
  double t1 = 0.0;
};

struct OutputConfig {
  std::filesystem::path directory = "output";
  double snapshot_interval = 0.0;  // s, 0 writes only the final snapshot
  std::vector<std::string> fields{"w", "P", "Q", "max_w"};
  std::optional<RunupConfig> runup;
  std::optional<AveragesConfig> averages;
};

struct RunConfig {
  Grid grid;
  stepper::StepperConfig stepper;
  std::array<SideConfig, 4> boundaries{boundary::Wall{}, boundary::Wall{}, boundary::Wall{}, boundary::Wall{}};
  ScenarioConfig scenario;
  std::vector<scenario::GaugeSpec> gauges;
  OutputConfig outputs;
  double duration = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
};

/// Parses and validates a JSON document. A relative bathymetry file path
/// resolves against `base_dir`; the output directory stays relative to the
/// working directory.
RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = {});

/// Reads and parses a file. Throws ConfigError (key path "") when the file
/// cannot be read.
RunConfig parse_config(const std::filesystem::path& path);

/// Cross-field checks repeated after CLI overrides.
void validate(RunConfig& cfg);

}  // namespace bsq::config
