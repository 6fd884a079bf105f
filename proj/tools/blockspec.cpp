// blockspec: command-line front end.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or configuration
// error, 3 numerical failure.

#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "blockspec/config.hpp"
#include "blockspec/parallel.hpp"
#include "blockspec/report.hpp"
#include "blockspec/verify.hpp"

using namespace blockspec;
using ojson = nlohmann::ordered_json;

namespace {

struct Globals {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

struct Overrides {
  std::optional<double> m, nu, L;
  std::optional<std::size_t> n;
  std::string potential;
  std::optional<double> depth, width;
  std::string weights;
  std::string rule;
  std::optional<std::size_t> block_n;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ScenarioConfig load(const Globals& g, ScenarioKind fallback, const Overrides& ov) {
  ScenarioConfig c;
  if (!g.config.empty()) {
    c = parse_config(g.config);
  } else {
    c.kind = fallback;
    if (fallback == ScenarioKind::dsum) {
      for (int a = 1; a <= 100; ++a) c.dsum.model.weights.push_back(a);
    }
  }
  if (g.seed) c.seed = *g.seed;
  if (g.threads) c.threads = g.threads;
  if (!g.out.empty()) c.out_dir = g.out;

  if (ov.m) c.symbol.params.m = c.gl.m = *ov.m;
  if (ov.nu) c.symbol.params.nu = c.gl.nu = *ov.nu;
  if (ov.L) c.gl.grid.half_length = *ov.L;
  if (ov.n) c.gl.grid.points = *ov.n;
  if (ov.block_n) c.blocks.n = *ov.block_n;
  if (!ov.potential.empty()) {
    if (ov.potential == "zero") c.gl.potential = Potential::zero();
    else if (ov.potential == "square_well") c.gl.potential = Potential::square_well(ov.depth.value_or(1.0), ov.width.value_or(2.0));
    else throw UsageError("--potential must be zero or square_well (use a config file for others)");
  }
  if (!ov.weights.empty() || !ov.rule.empty()) {
    std::string text = "[dsum]\n";
    if (!ov.weights.empty()) text += "weights = " + ov.weights + "\n";
    if (!ov.rule.empty()) text += "rule = " + ov.rule + "\n";
    text = "[scenario]\nkind = dsum\n" + text;
    const ScenarioConfig d = parse_config_text(text);
    if (!ov.weights.empty()) c.dsum.model.weights = d.dsum.model.weights;
    if (!ov.rule.empty()) c.dsum.model.b_rule = d.dsum.model.b_rule;
  }
  validate_config(c);
  return c;
}

void require_kind(const ScenarioConfig& c, std::initializer_list<ScenarioKind> ok, const char* cmd) {
  for (auto k : ok) {
    if (c.kind == k) return;
  }
  throw UsageError(std::string(cmd) + " does not apply to scenario kind '" + std::string(to_string(c.kind)) + "'");
}

std::string str(const ojson& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

void print_verdicts(const ojson& doc) {
  for (const auto& [name, v] : doc["verdicts"].items()) {
    std::printf("  %-34s %s  (%s, tol %s)\n", name.c_str(), v["pass"].get<bool>() ? "pass" : "FAIL",
                v["operation"].get<std::string>().c_str(), str(v["tolerance"]).c_str());
  }
  for (const auto& e : doc["errors"]) {
    std::printf("  error in %s: %s\n", e["stage"].get<std::string>().c_str(), e["message"].get<std::string>().c_str());
  }
}

void print_table(const CsvTable& t) {
  std::fputs(csv_text(t).c_str(), stdout);
}

ReportBundle run_and_emit(const ScenarioConfig& c) {
  ReportBundle b = run_scenario(c);
  if (!c.out_dir.empty()) {
    emit(b, c.out_dir);
    std::fprintf(stderr, "wrote %s/report.json\n", c.out_dir.c_str());
  }
  return b;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral analysis of block operator matrices and J-self-adjoint operators"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  Overrides ov;
  app.add_option("--config", g.config, "Scenario file")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "Output directory for report.json and CSV tables");
  app.add_option("--seed", g.seed, "Seed for randomized checks");
  app.add_option("--threads", g.threads, "Worker threads (default: BLOCKSPEC_THREADS or 1)")
      ->check(CLI::PositiveNumber);

  auto* bands = app.add_subcommand("bands", "Essential-spectrum bands of the symbol");
  bands->add_option("--m", ov.m, "Mass m > 0");
  bands->add_option("--nu", ov.nu, "Coupling nu in (-1, 1)");

  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of L = J[[A, C*], [C, B]]");
  spectrum->add_option("--n", ov.block_n, "Block size for random blocks");

  auto* lrg = app.add_subcommand("lrg", "Resolvent growth y ||(L - iy)^-1|| along the imaginary axis");
  lrg->add_option("--m", ov.m);
  lrg->add_option("--nu", ov.nu);

  auto* kappa = app.add_subcommand("kappa", "Negative-index triple of the block matrix, A and S(0)");
  kappa->add_option("--n", ov.block_n, "Block size for random blocks");

  auto* proj = app.add_subcommand("projector-growth", "Riesz projector norms for diagonal models");
  proj->add_option("--weights", ov.weights, "first:last[:step] or a comma list");
  proj->add_option("--rule", ov.rule, "identity or inverse");

  auto* gl = app.add_subcommand("gl", "Discretized operator on [-L, L]");
  gl->add_option("--m", ov.m);
  gl->add_option("--nu", ov.nu);
  gl->add_option("--L", ov.L, "Half length");
  gl->add_option("--n", ov.n, "Grid points");
  gl->add_option("--potential", ov.potential, "zero or square_well");
  gl->add_option("--depth", ov.depth);
  gl->add_option("--width", ov.width);

  auto* verify = app.add_subcommand("verify", "Run the acceptance criteria");
  std::string filter;
  std::optional<double> band_tol;
  verify->add_option("--filter", filter, "Criterion id, name or tag (e.g. bands)");
  verify->add_option("--band-tol", band_tol, "Override the band tolerance")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*verify) {
      VerifyOptions vo;
      vo.filter = filter;
      vo.band_tol = band_tol;
      vo.threads = resolve_threads(g.threads);
      if (g.seed) vo.seed = *g.seed;
      bool known = false;
      for (const auto& c : criteria()) known = known || matches_filter(c, filter);
      if (!known) throw UsageError("no criterion matches filter '" + filter + "'");
      const auto results = verify_all(vo);
      std::size_t failed = 0;
      for (const auto& r : results) {
        std::printf("[%s] %2d %-26s %7.2fs  %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                    r.detail.c_str());
        if (!r.pass) ++failed;
      }
      std::printf("%zu/%zu criteria passed\n", results.size() - failed, results.size());
      if (failed > 0) {
        std::printf("failed:");
        for (const auto& r : results) {
          if (!r.pass) std::printf(" %s", r.name.c_str());
        }
        std::printf("\n");
      }
      return failed == 0 ? 0 : 1;
    }

    if (*bands) {
      ScenarioConfig c = load(g, ScenarioKind::symbol, ov);
      if (c.kind == ScenarioKind::gl) {
        c.symbol.params = {c.gl.m, c.gl.nu};
        c.kind = ScenarioKind::symbol;
      }
      require_kind(c, {ScenarioKind::symbol}, "bands");
      const auto b = run_and_emit(c);
      print_table(b.tables.at("bands"));
      const auto& fill = b.doc["results"]["band_fill"];
      std::printf("# sweep fill: hausdorff %s\n", str(fill["hausdorff"]).c_str());
      return 0;
    }
    if (*spectrum) {
      const ScenarioConfig c = load(g, ScenarioKind::blocks, ov);
      require_kind(c, {ScenarioKind::blocks, ScenarioKind::gl}, "spectrum");
      const auto b = run_and_emit(c);
      print_table(b.tables.at("spectrum"));
      print_verdicts(b.doc);
      return 0;
    }
    if (*lrg) {
      const ScenarioConfig c = load(g, ScenarioKind::symbol, ov);
      require_kind(c, {ScenarioKind::blocks, ScenarioKind::symbol, ScenarioKind::gl}, "lrg");
      const auto b = run_and_emit(c);
      if (b.tables.contains("lrg")) print_table(b.tables.at("lrg"));
      print_verdicts(b.doc);
      return 0;
    }
    if (*kappa) {
      const ScenarioConfig c = load(g, ScenarioKind::blocks, ov);
      require_kind(c, {ScenarioKind::blocks, ScenarioKind::gl}, "kappa");
      const auto b = run_and_emit(c);
      const auto& k = b.doc["results"]["kappa"];
      if (k.contains("error")) {
        std::printf("kappa undetermined: %s\n", k["error"].get<std::string>().c_str());
      } else {
        for (const char* name : {"A_cal", "A", "S0"}) {
          std::printf("%-6s neg %s zero %s pos %s\n", name, str(k[name]["neg"]).c_str(), str(k[name]["zero"]).c_str(),
                      str(k[name]["pos"]).c_str());
        }
      }
      if (b.doc["verdicts"].contains("kappa_additivity")) {
        std::printf("additivity: %s\n", b.doc["verdicts"]["kappa_additivity"]["pass"].get<bool>() ? "holds" : "FAILS");
      }
      return 0;
    }
    if (*proj) {
      const ScenarioConfig c = load(g, ScenarioKind::dsum, ov);
      require_kind(c, {ScenarioKind::dsum}, "projector-growth");
      const auto b = run_and_emit(c);
      const auto& pg = b.doc["results"]["projector_growth"];
      std::printf("exponent %s, monotone %s, singular critical point evidence %s\n", str(pg["exponent"]).c_str(),
                  str(pg["monotone"]).c_str(), str(pg["singular_critical_point_evidence"]).c_str());
      print_verdicts(b.doc);
      return 0;
    }
    if (*gl) {
      const ScenarioConfig c = load(g, ScenarioKind::gl, ov);
      require_kind(c, {ScenarioKind::gl}, "gl");
      const auto b = run_and_emit(c);
      const auto& r = b.doc["results"];
      std::printf("bands: %s\n", r["bands"].dump().c_str());
      std::printf("gap: %s, discrete min|Re| %s\n", str(r["gap"]["closed_form"]).c_str(),
                  str(r["gap"]["min_abs_re_discrete"]).c_str());
      print_table(b.tables.at("lrg"));
      print_verdicts(b.doc);
      return 0;
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return is_numerical(e.kind()) ? 3 : 2;
  }
  return 0;
}
