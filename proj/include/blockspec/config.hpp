#pragma once

// Scenario files: flat key = value lines under [section] headers.
//
//   [scenario]   kind = blocks | symbol | dsum | gl, seed, out, threads
//   [tolerances] band_tol, inertia_tol, pair_tol, real_tol, K_report, growth_factor
//   [grids]      y = 0.5, 1, 2 ...
//   [blocks]     source = random | inline, n, flavor, indefinite, A, B, C (or A_file ...),
//                region = re_lo, re_hi, im_lo, im_hi, z_samples
//   [symbol]     m, nu, gauge = fourier | real, z = 0.5, 1, 2i ...
//   [dsum]       weights = 1:100 or a list, rule = identity | inverse, z, probe_z
//   [gl]         m, nu, L, n, potential = zero | square_well | gaussian | file,
//                depth, width, amplitude, sigma, file, full_via_T

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blockspec/block_core.hpp"
#include "blockspec/direct_sum.hpp"
#include "blockspec/random_blocks.hpp"
#include "blockspec/schrodinger.hpp"
#include "blockspec/symbol.hpp"

namespace blockspec {

enum class ScenarioKind { blocks, symbol, dsum, gl };

std::string_view to_string(ScenarioKind k) noexcept;

struct ScenarioTolerances {
  double band_tol = 2e-2;
  double inertia_tol = 1e-10;
  double pair_tol = 1e-8;
  double real_tol = 1e-8;
  double K_report = 10.0;
  double growth_factor = 5.0;
};

struct BlocksScenario {
  enum class Source { random, inline_matrices };
  Source source = Source::random;
  std::size_t n = 4;
  BlockFlavor flavor = BlockFlavor::general;
  bool indefinite = false;
  CMatrix A, B, C;  ///< inline source only
  std::optional<Region> region;  ///< via-T search region; derived from the direct spectrum if absent
  std::size_t z_samples = 20;    ///< Frobenius-Schur residual samples
};

struct SymbolScenario {
  GLSymbolParams params;
  SymbolGauge gauge = SymbolGauge::fourier;
  std::vector<cplx> z;  ///< resolvent-membership probes
};

struct DsumScenario {
  DiagonalModel model;
  cplx z{0.0, 1.0};
  cplx probe_z{0.0, 2.0};
};

struct GLScenario {
  Grid1D grid;
  double m = 1.0;
  double nu = 0.5;
  Potential potential;
  bool full_via_T = false;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::gl;
  std::uint64_t seed = 7;
  std::string out_dir;
  std::optional<unsigned> threads;
  ScenarioTolerances tol;
  std::vector<double> y_grid{0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0};
  BlocksScenario blocks;
  SymbolScenario symbol;
  DsumScenario dsum;
  GLScenario gl;
  /// Values as written, in file order, for the report echo.
  std::vector<std::pair<std::string, std::string>> raw;
};

/// Throws IoError, ParseError ("line N: ...") or ValidationError.
ScenarioConfig parse_config(const std::string& path);
/// Same, from text; relative file references resolve against `base_dir`.
ScenarioConfig parse_config_text(const std::string& text, const std::string& base_dir = ".");

/// Throws ValidationError.
void validate_config(const ScenarioConfig& c);

/// "1", "-2.5i", "1+2i", "i".
cplx parse_complex(const std::string& s);
/// Rows separated by ';', entries by ','.
CMatrix parse_matrix(const std::string& s);

}  // namespace blockspec
