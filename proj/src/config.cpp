#include "blockspec/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace blockspec {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::validation_error, msg); }

bool parse_number(std::string_view s, double& out) {
  if (s == "inf" || s == "+inf") {
    out = INFINITY;
    return true;
  }
  if (s == "-inf") {
    out = -INFINITY;
    return true;
  }
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

// Each entry point throws a plain message; the caller prefixes the line.
struct Bad {
  std::string msg;
};

double to_double(const std::string& v) {
  double x = 0.0;
  if (!parse_number(v, x)) throw Bad{"expected a number, got '" + v + "'"};
  return x;
}

std::size_t to_size(const std::string& v) {
  std::size_t x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || p != v.data() + v.size()) throw Bad{"expected a non-negative integer, got '" + v + "'"};
  return x;
}

bool to_bool(const std::string& v) {
  const std::string l = lower(v);
  if (l == "true" || l == "yes" || l == "1" || l == "on") return true;
  if (l == "false" || l == "no" || l == "0" || l == "off") return false;
  throw Bad{"expected true or false, got '" + v + "'"};
}

std::vector<double> to_list(const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split(v, ',')) out.push_back(to_double(item));
  return out;
}

/// "a:b" (step 1) or "a:b:step", else a comma list.
std::vector<double> to_weights(const std::string& v) {
  if (v.find(':') == std::string::npos) return to_list(v);
  const auto parts = split(v, ':');
  if (parts.size() < 2 || parts.size() > 3) throw Bad{"range must be first:last[:step]"};
  const double a = to_double(parts[0]);
  const double b = to_double(parts[1]);
  const double step = parts.size() == 3 ? to_double(parts[2]) : 1.0;
  if (!(step > 0.0) || !(b >= a)) throw Bad{"range needs first <= last and a positive step"};
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
  for (std::size_t k = 0; k < count; ++k) out.push_back(a + static_cast<double>(k) * step);
  return out;
}

std::string resolve(const std::string& base, const std::string& file) {
  const fs::path p(file);
  return p.is_absolute() ? p.string() : (fs::path(base) / p).string();
}

CMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("matrix file '" + path + "' does not exist or is unreadable");
  std::string text;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (!text.empty()) text += ';';
    text += t;
  }
  return parse_matrix(text);
}

}  // namespace

std::string_view to_string(ScenarioKind k) noexcept {
  switch (k) {
    case ScenarioKind::blocks: return "blocks";
    case ScenarioKind::symbol: return "symbol";
    case ScenarioKind::dsum: return "dsum";
    case ScenarioKind::gl: return "gl";
  }
  return "unknown";
}

cplx parse_complex(const std::string& raw) {
  std::string s;
  for (char ch : raw) {
    if (ch != ' ' && ch != '\t') s += ch;
  }
  if (s.empty()) throw Error(ErrorKind::parse_error, "empty complex number");
  auto fail = [&raw]() -> cplx { throw Error(ErrorKind::parse_error, "bad complex number '" + raw + "'"); };
  const bool imag = s.back() == 'i' || s.back() == 'j';
  if (!imag) {
    double x = 0.0;
    if (!parse_number(s, x)) fail();
    return {x, 0.0};
  }
  s.pop_back();
  // Split at the last sign that is not part of an exponent.
  std::size_t cut = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      cut = k;
      break;
    }
  }
  auto coef = [&](std::string t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    double x = 0.0;
    if (!parse_number(t, x)) fail();
    return x;
  };
  if (cut == std::string::npos) return {0.0, coef(s)};
  double re = 0.0;
  if (!parse_number(s.substr(0, cut), re)) fail();
  return {re, coef(s.substr(cut))};
}

CMatrix parse_matrix(const std::string& s) {
  std::vector<std::vector<cplx>> rows;
  for (const auto& row : split(s, ';')) {
    if (row.empty()) continue;
    std::vector<cplx> r;
    for (const auto& e : split(row, ',')) r.push_back(parse_complex(e));
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw Error(ErrorKind::parse_error, "empty matrix");
  const std::size_t cols = rows.front().size();
  std::vector<cplx> data;
  for (const auto& r : rows) {
    if (r.size() != cols) throw Error(ErrorKind::parse_error, "ragged matrix rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return CMatrix(rows.size(), cols, std::move(data));
}

ScenarioConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot read config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const fs::path parent = fs::path(path).parent_path();
  return parse_config_text(buf.str(), parent.empty() ? "." : parent.string());
}

ScenarioConfig parse_config_text(const std::string& text, const std::string& base_dir) {
  ScenarioConfig c;
  std::string section;
  std::string potential_kind = "zero";
  double depth = 0.0, width = 0.0, amplitude = 0.0, sigma = 1.0;
  std::string potential_file;
  std::string a_text, b_text, c_text;
  std::size_t lineno = 0;
  std::istringstream in(text);
  std::string line;

  static const std::map<std::string, std::vector<std::string>> known = {
      {"scenario", {"kind", "seed", "out", "threads"}},
      {"tolerances", {"band_tol", "inertia_tol", "pair_tol", "real_tol", "k_report", "growth_factor"}},
      {"grids", {"y"}},
      {"blocks", {"source", "n", "flavor", "indefinite", "a", "b", "c", "a_file", "b_file", "c_file", "region",
                  "z_samples"}},
      {"symbol", {"m", "nu", "gauge", "z"}},
      {"dsum", {"weights", "rule", "z", "probe_z"}},
      {"gl", {"m", "nu", "l", "n", "potential", "depth", "width", "amplitude", "sigma", "file", "full_via_t"}},
  };

  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    std::string t = trim(line);
    if (const auto hash = t.find('#'); hash != std::string::npos) t = trim(t.substr(0, hash));
    if (t.empty() || t.front() == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw Error(ErrorKind::parse_error, where + "unterminated section header");
      section = lower(trim(t.substr(1, t.size() - 2)));
      if (!known.contains(section)) throw Error(ErrorKind::parse_error, where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::parse_error, where + "expected key = value");
    if (section.empty()) throw Error(ErrorKind::parse_error, where + "key outside any [section]");
    const std::string key = lower(trim(t.substr(0, eq)));
    const std::string val = trim(t.substr(eq + 1));
    const auto& keys = known.at(section);
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw Error(ErrorKind::parse_error, where + "unknown key '" + key + "' in [" + section + "]");
    }
    if (val.empty()) throw Error(ErrorKind::parse_error, where + "empty value for '" + key + "'");
    c.raw.emplace_back(section + "." + key, val);

    try {
      if (section == "scenario") {
        if (key == "kind") {
          const std::string k = lower(val);
          if (k == "blocks") c.kind = ScenarioKind::blocks;
          else if (k == "symbol") c.kind = ScenarioKind::symbol;
          else if (k == "dsum") c.kind = ScenarioKind::dsum;
          else if (k == "gl") c.kind = ScenarioKind::gl;
          else throw Bad{"kind must be blocks, symbol, dsum or gl"};
        } else if (key == "seed") {
          c.seed = to_size(val);
        } else if (key == "out") {
          c.out_dir = val;
        } else if (key == "threads") {
          c.threads = static_cast<unsigned>(to_size(val));
        }
      } else if (section == "tolerances") {
        const double x = to_double(val);
        if (key == "band_tol") c.tol.band_tol = x;
        else if (key == "inertia_tol") c.tol.inertia_tol = x;
        else if (key == "pair_tol") c.tol.pair_tol = x;
        else if (key == "real_tol") c.tol.real_tol = x;
        else if (key == "k_report") c.tol.K_report = x;
        else if (key == "growth_factor") c.tol.growth_factor = x;
      } else if (section == "grids") {
        c.y_grid = to_list(val);
      } else if (section == "blocks") {
        auto& b = c.blocks;
        if (key == "source") {
          const std::string s = lower(val);
          if (s == "random") b.source = BlocksScenario::Source::random;
          else if (s == "inline") b.source = BlocksScenario::Source::inline_matrices;
          else throw Bad{"source must be random or inline"};
        } else if (key == "n") {
          b.n = to_size(val);
        } else if (key == "flavor") {
          const std::string s = lower(val);
          if (s == "general") b.flavor = BlockFlavor::general;
          else if (s == "positive") b.flavor = BlockFlavor::positive;
          else throw Bad{"flavor must be general or positive"};
        } else if (key == "indefinite") {
          b.indefinite = to_bool(val);
        } else if (key == "a") {
          a_text = val;
        } else if (key == "b") {
          b_text = val;
        } else if (key == "c") {
          c_text = val;
        } else if (key == "a_file") {
          b.A = read_matrix_file(resolve(base_dir, val));
        } else if (key == "b_file") {
          b.B = read_matrix_file(resolve(base_dir, val));
        } else if (key == "c_file") {
          b.C = read_matrix_file(resolve(base_dir, val));
        } else if (key == "region") {
          const auto r = to_list(val);
          if (r.size() != 4) throw Bad{"region needs re_lo, re_hi, im_lo, im_hi"};
          b.region = Region{r[0], r[1], r[2], r[3]};
        } else if (key == "z_samples") {
          b.z_samples = to_size(val);
        }
      } else if (section == "symbol") {
        auto& s = c.symbol;
        if (key == "m") s.params.m = to_double(val);
        else if (key == "nu") s.params.nu = to_double(val);
        else if (key == "gauge") {
          const std::string g = lower(val);
          if (g == "fourier") s.gauge = SymbolGauge::fourier;
          else if (g == "real") s.gauge = SymbolGauge::real;
          else throw Bad{"gauge must be fourier or real"};
        } else if (key == "z") {
          s.z.clear();
          for (const auto& item : split(val, ',')) s.z.push_back(parse_complex(item));
        }
      } else if (section == "dsum") {
        auto& d = c.dsum;
        if (key == "weights") d.model.weights = to_weights(val);
        else if (key == "rule") {
          const std::string r = lower(val);
          if (r == "identity") d.model.b_rule = BRule::identity;
          else if (r == "inverse") d.model.b_rule = BRule::inverse;
          else throw Bad{"rule must be identity or inverse"};
        } else if (key == "z") d.z = parse_complex(val);
        else if (key == "probe_z") d.probe_z = parse_complex(val);
      } else if (section == "gl") {
        auto& g = c.gl;
        if (key == "m") g.m = to_double(val);
        else if (key == "nu") g.nu = to_double(val);
        else if (key == "l") g.grid.half_length = to_double(val);
        else if (key == "n") g.grid.points = to_size(val);
        else if (key == "potential") potential_kind = lower(val);
        else if (key == "depth") depth = to_double(val);
        else if (key == "width") width = to_double(val);
        else if (key == "amplitude") amplitude = to_double(val);
        else if (key == "sigma") sigma = to_double(val);
        else if (key == "file") potential_file = val;
        else if (key == "full_via_t") g.full_via_T = to_bool(val);
      }
    } catch (const Bad& b) {
      throw Error(ErrorKind::parse_error, where + b.msg);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::parse_error) throw;
      throw Error(ErrorKind::parse_error, where + e.what());
    }
  }

  if (!a_text.empty()) c.blocks.A = parse_matrix(a_text);
  if (!b_text.empty()) c.blocks.B = parse_matrix(b_text);
  if (!c_text.empty()) c.blocks.C = parse_matrix(c_text);

  if (potential_kind == "zero") {
    c.gl.potential = Potential::zero();
  } else if (potential_kind == "square_well") {
    if (!(width > 0.0)) invalid("square_well potential needs width > 0");
    c.gl.potential = Potential::square_well(depth, width);
  } else if (potential_kind == "gaussian") {
    if (!(sigma > 0.0)) invalid("gaussian potential needs sigma > 0");
    c.gl.potential = Potential::gaussian(amplitude, sigma);
  } else if (potential_kind == "file") {
    if (potential_file.empty()) invalid("potential = file needs gl.file");
    const std::string path = resolve(base_dir, potential_file);
    if (!fs::exists(path)) invalid("potential file '" + path + "' does not exist");
    try {
      c.gl.potential = Potential::from_csv(path);
    } catch (const Error& e) {
      invalid(e.what());
    }
  } else {
    invalid("potential must be zero, square_well, gaussian or file");
  }

  validate_config(c);
  return c;
}

void validate_config(const ScenarioConfig& c) {
  const auto& t = c.tol;
  for (const auto& [name, v] : {std::pair{"band_tol", t.band_tol}, {"inertia_tol", t.inertia_tol},
                                {"pair_tol", t.pair_tol}, {"real_tol", t.real_tol}, {"K_report", t.K_report},
                                {"growth_factor", t.growth_factor}}) {
    if (!(v > 0.0) || !std::isfinite(v)) invalid(std::string(name) + " must be positive and finite");
  }
  if (c.y_grid.empty()) invalid("grids.y must not be empty");
  for (double y : c.y_grid) {
    if (!(y > 0.0) || !std::isfinite(y)) invalid("grids.y entries must be positive and finite");
  }
  if (c.threads && *c.threads == 0) invalid("threads must be at least 1");

  auto check_nu = [](double nu, bool allow_zero) {
    if (!(std::abs(nu) < 1.0)) invalid("nu = " + std::to_string(nu) + " violates ν ∈ (−1,1)");
    if (!allow_zero && nu == 0.0) invalid("nu must be nonzero for the discretized operator");
  };
  auto check_m = [](double m) {
    if (!(m > 0.0) || !std::isfinite(m)) invalid("m must be positive");
  };

  switch (c.kind) {
    case ScenarioKind::blocks: {
      const auto& b = c.blocks;
      if (b.source == BlocksScenario::Source::random) {
        if (b.n == 0 || b.n > 64) invalid("blocks.n must lie in [1, 64]");
      } else {
        if (b.A.empty() || b.B.empty() || b.C.empty()) invalid("inline blocks need A, B and C");
        const std::size_t n = b.A.rows();
        if (!b.A.is_square() || b.B.rows() != n || !b.B.is_square() || b.C.rows() != n || b.C.cols() != n) {
          invalid("A, B and C must be square and of equal size");
        }
      }
      if (b.region && !(b.region->re_lo < b.region->re_hi && b.region->im_lo < b.region->im_hi)) {
        invalid("blocks.region must have lo < hi");
      }
      break;
    }
    case ScenarioKind::symbol:
      check_m(c.symbol.params.m);
      check_nu(c.symbol.params.nu, true);
      break;
    case ScenarioKind::dsum: {
      const auto& w = c.dsum.model.weights;
      if (w.empty()) invalid("dsum.weights must not be empty");
      for (std::size_t k = 0; k < w.size(); ++k) {
        if (!(w[k] > 0.0)) invalid("dsum.weights must be positive");
        if (k > 0 && !(w[k] > w[k - 1])) invalid("dsum.weights must be strictly increasing");
      }
      break;
    }
    case ScenarioKind::gl:
      check_m(c.gl.m);
      check_nu(c.gl.nu, false);
      if (!(c.gl.grid.half_length > 0.0)) invalid("gl.L must be positive");
      if (c.gl.grid.points < 3) invalid("gl.n must be at least 3");
      break;
  }
}

}  // namespace blockspec
