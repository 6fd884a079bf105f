#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "blockspec/config.hpp"
#include "blockspec/report.hpp"
#include "blockspec/verify.hpp"

using namespace blockspec;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "blockspec_unit" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::invalid_argument;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(BLOCKSPEC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("cli-report") {

TEST_CASE("config defaults and parsing") {
  const auto c = parse_config_text("[scenario]\nkind = gl\n[gl]\nm = 1\nnu = 0.5\n");
  CHECK(c.kind == ScenarioKind::gl);
  CHECK(c.gl.grid.half_length == 40.0);
  CHECK(c.gl.grid.points == 800);
  CHECK(c.gl.nu == 0.5);
  CHECK(c.tol.band_tol == 2e-2);

  const auto d = parse_config_text("[scenario]\nkind = dsum\n[dsum]\nweights = 1:10\nrule = inverse\n");
  CHECK(d.dsum.model.weights.size() == 10);
  CHECK(d.dsum.model.b_rule == BRule::inverse);

  CHECK(parse_complex("1+2i") == cplx(1.0, 2.0));
  CHECK(parse_complex("-2.5i") == cplx(0.0, -2.5));
  CHECK(parse_complex("i") == cplx(0.0, 1.0));
  CHECK(parse_matrix("1, 2; 3, 4") == CMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}}));
}

TEST_CASE("config errors") {
  try {
    parse_config_text("[scenario]\nkind = gl\n[gl]\nnu = 1.5\n");
    FAIL("expected ValidationError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::validation_error);
    CHECK(std::string(e.what()).find("ν ∈ (−1,1)") != std::string::npos);
  }
  CHECK(kind_of([] { parse_config_text("[scenario]\nkind = gl\n[gl]\npotential = file\nfile = nowhere.csv\n"); }) ==
        ErrorKind::validation_error);
  CHECK(kind_of([] { parse_config_text("[scenario]\nkind = gl\n[gl]\nnu = 0\n"); }) == ErrorKind::validation_error);
  CHECK(kind_of([] { parse_config_text("[tolerances]\nband_tol = -1\n"); }) == ErrorKind::validation_error);
  try {
    parse_config_text("[scenario]\nkind = gl\n\n[gl]\nbogus = 3\n");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse_error);
    CHECK(std::string(e.what()).find("line 5") != std::string::npos);
  }
  CHECK(kind_of([] { parse_config_text("[nowhere]\n"); }) == ErrorKind::parse_error);
  CHECK(kind_of([] { parse_config_text("[gl]\nm = abc\n"); }) == ErrorKind::parse_error);
  CHECK(kind_of([] { parse_config("/nonexistent/blockspec.cfg"); }) == ErrorKind::io_error);
}

TEST_CASE("potential file resolves relative to the config") {
  const auto dir = scratch("potfile");
  std::ofstream(dir / "well.csv") << "-1,0\n0,-1\n1,0\n";
  std::ofstream(dir / "s.cfg") << "[scenario]\nkind = gl\n[gl]\npotential = file\nfile = well.csv\n";
  const auto c = parse_config((dir / "s.cfg").string());
  CHECK(c.gl.potential(0.0) == -1.0);
}

TEST_CASE("CSV number format") {
  CHECK(csv_number(0.64) == "0.64");
  CHECK(csv_number(1.0) == "1.0");
  CHECK(csv_number(INFINITY) == "inf");
  CHECK(csv_number(-INFINITY) == "-inf");
  CHECK(csv_number(NAN) == "nan");
  CHECK(csv_text({{"a", "b"}, {{1.5, 2.0}}}) == "a,b\n1.5,2.0\n");
}

TEST_CASE("bands table") {
  auto c = parse_config_text("[scenario]\nkind = symbol\n[symbol]\nm = 2\nnu = 0.6\n");
  const auto dir = scratch("bands");
  emit(run_scenario(c), dir.string());
  CHECK(slurp(dir / "bands.csv") == "band_lo,band_hi\n0.64,1.0\n4.0,inf\n");
  CHECK(fs::exists(dir / "report.json"));
}

TEST_CASE("empty region gives a header-only spectrum table") {
  const auto c = parse_config_text(
      "[scenario]\nkind = blocks\n[blocks]\nsource = inline\na = 4\nb = 1\nc = 0\nregion = 10, 11, 10, 11\n");
  const auto b = run_scenario(c);
  CHECK(b.tables.at("spectrum").rows.empty());
  const auto dir = scratch("empty");
  emit(b, dir.string());
  CHECK(slurp(dir / "spectrum.csv") == "re,im,residual\n");
}

TEST_CASE("bundle contents, round trip and determinism") {
  auto c = parse_config_text("[scenario]\nkind = blocks\nseed = 7\n[blocks]\nn = 3\n");
  const auto d1 = scratch("det1"), d2 = scratch("det2");
  const auto b = run_scenario(c);
  emit(b, d1.string());
  emit(run_scenario(c), d2.string());
  CHECK(slurp(d1 / "report.json") == slurp(d2 / "report.json"));

  const auto doc = load_bundle((d1 / "report.json").string());
  CHECK(doc["schema_version"] == kSchemaVersion);
  CHECK(bundle_verdicts(doc) == bundle_verdicts(b.doc));
  CHECK_FALSE(bundle_verdicts(doc).empty());
  for (const auto& [name, v] : doc["verdicts"].items()) {
    CAPTURE(name);
    CHECK(v.contains("operation"));
    CHECK(v.contains("tolerance"));
    CHECK(v["operation"].get<std::string>() != "");
  }
}

TEST_CASE("dsum and gl scenarios") {
  auto d = parse_config_text("[scenario]\nkind = dsum\n[dsum]\nweights = 1:100\n");
  const auto bd = run_scenario(d);
  CHECK(bd.tables.at("projector").rows.size() == 100);
  const double e = bd.doc["results"]["projector_growth"]["exponent"].get<double>();
  CHECK(e > 0.4);
  CHECK(e < 0.5);

  auto g = parse_config_text("[scenario]\nkind = gl\n[gl]\nm = 1\nnu = 0.6\nL = 15\nn = 121\n");
  g.y_grid = {1.0, 10.0};
  const auto bg = run_scenario(g);
  const auto& r = bg.doc["results"];
  for (const char* key : {"bands", "gap", "lrg", "kappa"}) CHECK(r.contains(key));
  CHECK(bg.tables.at("lrg").rows.size() == 2);
}

TEST_CASE("verify filter and tolerance sensitivity") {
  VerifyOptions o;
  o.filter = "bands";
  const auto ok = verify_all(o);
  REQUIRE(ok.size() == 1);
  CHECK(ok[0].name == "band_formula");
  CHECK(ok[0].pass);
  o.band_tol = 1e-6;
  const auto bad = verify_all(o);
  CHECK_FALSE(bad[0].pass);
  CHECK(criteria().size() == 14);
}

TEST_CASE("CLI exit codes") {
  const auto dir = scratch("cli");
  CHECK(run_cli("bands --m 2 --nu 0.6 --out " + dir.string()) == 0);
  CHECK(slurp(dir / "bands.csv") == "band_lo,band_hi\n0.64,1.0\n4.0,inf\n");
  CHECK(run_cli("bands --m 2 --nu 1.5") == 2);
  CHECK(run_cli("no-such-command") == 2);
  CHECK(run_cli("verify --filter nothing-matches") == 2);
  CHECK(run_cli("verify --filter bands") == 0);
  CHECK(run_cli("verify --filter bands --band-tol 1e-6") == 1);
  CHECK(run_cli("projector-growth --weights 1:50") == 0);
  // One unknown at x = 0 with h = 2: H_V = 2/h^2 + m^2 + V(0) = 0 exactly.
  std::ofstream(dir / "sing.cfg") << "[scenario]\nkind = gl\n[gl]\nm = 1\nnu = 0.5\nL = 2\nn = 3\n"
                                     "potential = gaussian\namplitude = -1.5\nsigma = 0.1\n";
  CHECK(run_cli("gl --config " + (dir / "sing.cfg").string()) == 3);
}

}  // TEST_SUITE
