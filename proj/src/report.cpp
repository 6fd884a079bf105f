#include "blockspec/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "blockspec/parallel.hpp"

namespace blockspec {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

ojson num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

ojson cnum(cplx z) { return ojson::array({num(z.real()), num(z.imag())}); }

ojson inertia_json(const Inertia& in) {
  return {{"neg", in.n_neg}, {"zero", in.n_zero}, {"pos", in.n_pos}, {"tol", in.tol}};
}

ojson bands_json(const BandSet& b) {
  ojson out = ojson::array();
  for (const auto& band : b.bands) out.push_back(ojson::array({num(band.lo), num(band.hi)}));
  return out;
}

CsvTable bands_table(const BandSet& b) {
  CsvTable t{{"band_lo", "band_hi"}, {}};
  for (const auto& band : b.bands) t.rows.push_back({band.lo, band.hi});
  return t;
}

CsvTable lrg_table(const LrgScan& s) {
  CsvTable t{{"y", "resolvent_norm", "product"}, {}};
  for (const auto& p : s.points) t.rows.push_back({p.y, p.norm, p.product});
  return t;
}

ojson lrg_json(const LrgScan& s) {
  ojson pts = ojson::array();
  for (const auto& p : s.points) pts.push_back({{"y", p.y}, {"resolvent_norm", num(p.norm)}, {"product", num(p.product)}});
  return {{"points", pts},
          {"verdict", std::string(to_string(s.verdict))},
          {"sup_product", num(s.sup_product)},
          {"max_decade_growth", num(s.max_decade_growth)},
          {"K_report", s.K_report},
          {"growth_factor", s.growth_factor}};
}

struct Verdicts {
  ojson obj = ojson::object();
  std::vector<std::string> one_sided;

  void add(const std::string& name, bool pass, const std::string& op, double tol, bool one_sided_test = false) {
    obj[name] = {{"pass", pass}, {"operation", op}, {"tolerance", num(tol)}, {"one_sided", one_sided_test}};
    if (one_sided_test) one_sided.push_back(name);
  }
};

struct Errors {
  ojson list = ojson::array();

  template <class F>
  void attempt(const std::string& stage, F&& f) {
    try {
      f();
    } catch (const Error& e) {
      list.push_back({{"stage", stage}, {"kind", std::string(to_string(e.kind()))}, {"message", e.what()}});
    }
  }
};

[[noreturn]] void rethrow_with(const std::string& stage, const Error& e) {
  throw Error(e.kind(), stage + ": " + e.what());
}

// LRG verdicts rest on a finite y grid: a pass is evidence, not proof.
bool is_one_sided(const std::string& name) {
  return name.rfind("lrg_", 0) == 0 || name == "gap_respected" || name == "t_route_consistent";
}

void add_report_verdicts(Verdicts& v, const SpectralReport& r) {
  for (const auto& [name, pass] : r.verdicts) {
    const auto it = r.verdict_sources.find(name);
    const std::string op = it == r.verdict_sources.end() ? "spectral_report" : it->second.first;
    const double tol = it == r.verdict_sources.end() ? 0.0 : it->second.second;
    v.add(name, pass, op, tol, is_one_sided(name));
  }
}

ojson spectrum_json(const std::vector<cplx>& values, const std::vector<double>& residuals) {
  ojson out = ojson::array();
  for (std::size_t k = 0; k < values.size(); ++k) {
    out.push_back({{"value", cnum(values[k])}, {"residual", k < residuals.size() ? num(residuals[k]) : ojson(nullptr)}});
  }
  return out;
}

CsvTable spectrum_table(const std::vector<cplx>& values, const std::vector<double>& residuals,
                        const std::optional<Region>& region) {
  std::vector<std::size_t> order(values.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a].real() != values[b].real()) return values[a].real() < values[b].real();
    return values[a].imag() < values[b].imag();
  });
  CsvTable t{{"re", "im", "residual"}, {}};
  for (std::size_t k : order) {
    if (region && !region->contains(values[k])) continue;
    t.rows.push_back({values[k].real(), values[k].imag(), k < residuals.size() ? residuals[k] : NAN});
  }
  return t;
}

ojson config_json(const ScenarioConfig& c) {
  ojson raw = ojson::object();
  for (const auto& [k, v] : c.raw) raw[k] = v;
  return {{"kind", std::string(to_string(c.kind))},
          {"seed", c.seed},
          {"tolerances",
           {{"band_tol", c.tol.band_tol},
            {"inertia_tol", c.tol.inertia_tol},
            {"pair_tol", c.tol.pair_tol},
            {"real_tol", c.tol.real_tol},
            {"K_report", c.tol.K_report},
            {"growth_factor", c.tol.growth_factor}}},
          {"y_grid", c.y_grid},
          {"as_written", raw}};
}

LrgOptions lrg_options(const ScenarioConfig& c, unsigned threads) {
  LrgOptions o;
  o.K_report = c.tol.K_report;
  o.growth_factor = c.tol.growth_factor;
  o.threads = threads;
  return o;
}

// ---------------------------------------------------------------- blocks

void run_blocks(const ScenarioConfig& c, unsigned threads, ReportBundle& b, Verdicts& v, Errors& err) {
  Rng rng(c.seed);
  BlockCoefficients coeffs;
  if (c.blocks.source == BlocksScenario::Source::random) {
    RandomBlockOptions ro;
    ro.flavor = c.blocks.flavor;
    ro.require_indefinite_A = c.blocks.indefinite;
    coeffs = random_blocks(rng, c.blocks.n, ro);
  } else {
    coeffs = {c.blocks.A, c.blocks.B, c.blocks.C, "inline"};
  }
  BlockValidity validity;
  try {
    validity = validate(coeffs);
  } catch (const Error& e) {
    rethrow_with("blocks", e);
  }

  SpectralReportOptions so;
  so.inertia_tol = c.tol.inertia_tol;
  so.pair_tol = c.tol.pair_tol;
  so.real_tol = c.tol.real_tol;
  so.lrg = lrg_options(c, threads);
  SpectralReport rep;
  try {
    rep = spectral_report(coeffs, {}, so);
  } catch (const Error& e) {
    rethrow_with("spectral_report", e);
  }
  err.attempt("lrg_scan", [&] {
    rep.lrg = lrg_scan(coeffs, c.y_grid, so.lrg);
    rep.verdicts["lrg_violated"] = rep.lrg.verdict == LrgVerdict::violated;
    rep.verdict_sources["lrg_violated"] = {"lrg_scan", so.lrg.growth_factor};
    rep.verdicts["lrg_consistent_on_grid"] = rep.lrg.verdict == LrgVerdict::consistent_on_grid;
    rep.verdict_sources["lrg_consistent_on_grid"] = {"lrg_scan", so.lrg.K_report};
    b.tables["lrg"] = lrg_table(rep.lrg);
  });
  add_report_verdicts(v, rep);

  ojson res;
  res["n"] = coeffs.n();
  res["source"] = c.blocks.source == BlocksScenario::Source::random ? "random" : "inline";
  res["rcond_A"] = num(validity.rcond_A);
  res["vacuous_conditions"] = validity.vacuous;
  res["eigenvalues_L"] = spectrum_json(rep.eigenvalues_L, rep.residuals_L);
  res["eigenvalues_A_cal"] = rep.eigenvalues_A_cal;
  res["kappa"] = {{"A_cal", inertia_json(rep.kappa_Acal)},
                  {"A", inertia_json(rep.kappa_A)},
                  {"S0", inertia_json(rep.kappa_S0)}};
  ojson pairs = ojson::array();
  for (const auto& [a, bb] : rep.nonreal_pairs) pairs.push_back(ojson::array({cnum(a), cnum(bb)}));
  res["nonreal_pairs"] = pairs;
  res["lrg"] = lrg_json(rep.lrg);

  Region region;
  if (c.blocks.region) {
    region = *c.blocks.region;
  } else {
    double r = 0.0;
    for (const cplx z : rep.eigenvalues_L) r = std::max({r, std::abs(z.real()), std::abs(z.imag())});
    r += 0.5;
    region = {-r, r, -r, r};
  }
  res["region"] = {region.re_lo, region.re_hi, region.im_lo, region.im_hi};
  err.attempt("spectrum_L_via_T", [&] {
    ViaTOptions vo;
    vo.threads = threads;
    const auto via = spectrum_L_via_T(coeffs, region, vo);
    std::vector<cplx> direct_in;
    for (const cplx z : rep.eigenvalues_L) {
      if (region.contains(z)) direct_in.push_back(z);
    }
    const double h = hausdorff_distance(direct_in, via.roots);
    ojson roots = ojson::array();
    for (const cplx z : via.roots) roots.push_back(cnum(z));
    res["via_T"] = {{"roots", roots},
                    {"roots_total", via.roots_total},
                    {"seeds_tried", via.seeds_tried},
                    {"hausdorff_to_direct", num(h)}};
    v.add("via_T_matches_direct", h <= 1e-6, "spectrum_L_via_T", 1e-6);
  });

  err.attempt("frobenius_schur_check", [&] {
    double worst = 0.0;
    double radius = 1.0;
    for (const cplx z : rep.eigenvalues_L) radius = std::max(radius, std::abs(z));
    for (std::size_t k = 0; k < c.blocks.z_samples; ++k) {
      const cplx z = random_z_off_spectrum(rng, coeffs.A, radius, 0.05);
      worst = std::max(worst, frobenius_schur_check(coeffs, z));
    }
    res["frobenius_schur_max_residual"] = num(worst);
    v.add("frobenius_schur", worst <= 1e-9, "frobenius_schur_check", 1e-9);
  });

  b.doc["results"] = res;
  b.tables["spectrum"] = spectrum_table(rep.eigenvalues_L, rep.residuals_L, c.blocks.region);
  b.doc["provenance"]["truncation"] = false;
}

// ---------------------------------------------------------------- symbol

void run_symbol(const ScenarioConfig& c, ReportBundle& b, Verdicts& v, Errors& err) {
  const auto& p = c.symbol.params;
  const SymbolTriple s = gl_symbol(p, c.symbol.gauge);
  const auto grid = default_lambda_grid();
  ojson res;
  res["m"] = p.m;
  res["nu"] = p.nu;
  res["gauge"] = c.symbol.gauge == SymbolGauge::fourier ? "fourier" : "real";

  const BandSet bands = ess_spectrum_bands(p);
  res["bands"] = bands_json(bands);
  b.tables["bands"] = bands_table(bands);
  const BandFill fill = band_fill_check(p);
  res["band_fill"] = {{"hausdorff", fill.hausdorff},
                      {"max_outside", fill.max_outside},
                      {"max_uncovered", fill.max_uncovered},
                      {"samples", fill.samples}};
  v.add("band_fill", fill.ok, "band_fill_check", fill.band_tol);

  const LSymbolSpectrum ls = spectrum_L_symbol(p, grid);
  res["L_symbol"] = {{"bands", bands_json(ls.bands)},
                     {"gap_closed_form", ls.gap_closed_form},
                     {"gap_sweep_hi", ls.gap_sweep_hi},
                     {"gap_sweep_lo", ls.gap_sweep_lo}};
  v.add("gap_sweep_matches_closed_form",
        std::abs(ls.gap_sweep_hi - ls.gap_closed_form) <= 1e-9 && std::abs(ls.gap_sweep_lo + ls.gap_closed_form) <= 1e-9,
        "spectrum_L_symbol", 1e-9);

  // Resolvent entry of the symbol along z = iy.
  CsvTable lrg{{"y", "resolvent_norm", "product"}, {}};
  ojson pts = ojson::array();
  const double bound = 1.0 / (1.0 - p.nu * p.nu);
  bool above = true;
  for (double y : c.y_grid) {
    const SupResult e = lrg_sup(s, {0.0, y}, grid, LrgIntegrand::resolvent_entry);
    const SupResult f = lrg_sup(s, {0.0, y}, grid, LrgIntegrand::full);
    lrg.rows.push_back({y, e.value, y * e.value});
    pts.push_back({{"y", y},
                   {"entry_sup", num(e.value)},
                   {"full_sup", num(f.value)},
                   {"product", num(y * e.value)},
                   {"tail_limit", num(e.tail_limit)}});
    above = above && e.value >= bound * (1.0 - 1e-12);
  }
  res["lrg"] = {{"lower_bound", bound}, {"points", pts}};
  b.tables["lrg"] = lrg;
  v.add("lrg_sup_above_lower_bound", above, "lrg_sup", 1e-12, true);

  ojson members = ojson::array();
  for (const cplx z : c.symbol.z) {
    err.attempt("resolvent_membership", [&] {
      const auto r = resolvent_membership(s, z, grid);
      ojson poles = ojson::array();
      for (double l : r.sup.pole_locations) poles.push_back(l);
      members.push_back({{"z", cnum(z)},
                         {"in_resolvent", r.in_resolvent},
                         {"sup", num(r.sup.value)},
                         {"pole", r.sup.pole},
                         {"pole_locations", poles}});
    });
  }
  res["resolvent_membership"] = members;

  err.attempt("real_spectrum_criterion", [&] {
    const auto r = real_spectrum_criterion(s, grid);
    res["real_spectrum_criterion"] = {{"holds", r.holds}, {"min_positivity", r.min_positivity}, {"sup", num(r.sup.value)}};
    v.add("real_spectrum_criterion", r.holds, "real_spectrum_criterion", 1e8);
  });
  b.doc["results"] = res;
  b.doc["provenance"]["truncation"] = false;
}

// ---------------------------------------------------------------- dsum

void run_dsum(const ScenarioConfig& c, ReportBundle& b, Verdicts& v, Errors& err) {
  const auto& model = c.dsum.model;
  try {
    model.validate();
  } catch (const Error& e) {
    rethrow_with("dsum", e);
  }
  ojson res;
  res["rule"] = std::string(to_string(model.b_rule));
  res["weights"] = {{"count", model.weights.size()}, {"first", model.weights.front()}, {"last", model.weights.back()}};

  const ProjectorGrowth g = projector_growth_scan(model);
  CsvTable proj{{"weight", "norm"}, {}};
  for (std::size_t k = 0; k < g.weights.size(); ++k) proj.rows.push_back({g.weights[k], g.norms[k]});
  b.tables["projector"] = proj;
  res["projector_growth"] = {{"exponent", g.exponent},
                             {"monotone", g.monotone},
                             {"singular_critical_point_evidence", g.singular_critical_point_evidence}};
  v.add("singular_critical_point_evidence", g.singular_critical_point_evidence, "projector_growth_scan", 0.25, true);

  err.attempt("t_inverse_norm_scan", [&] {
    const TInverseScan s = t_inverse_norm_scan(model, c.dsum.z);
    res["t_inverse"] = {{"z", cnum(s.z)},
                        {"truncation", s.truncation},
                        {"norms", s.norms},
                        {"nondecreasing", s.nondecreasing},
                        {"last", num(s.last)}};
  });

  if (model.b_rule == BRule::inverse) {
    err.attempt("definitizability_probe", [&] {
      const auto d = definitizability_probe(model, c.dsum.probe_z);
      res["definitizability_probe"] = {{"t_at_plus_one", d.t_at_plus_one},
                                       {"t_at_minus_one", d.t_at_minus_one},
                                       {"linear_fit_error", d.linear_fit_error},
                                       {"resolvent_empty_in_limit", d.resolvent_empty_in_limit},
                                       {"note", d.note}};
      v.add("resolvent_empty_in_limit", d.resolvent_empty_in_limit, "definitizability_probe", 1e-10, true);
    });
  }
  b.doc["results"] = res;
  b.doc["provenance"]["truncation"] = true;
}

// ---------------------------------------------------------------- gl

void run_gl(const ScenarioConfig& c, unsigned threads, ReportBundle& b, Verdicts& v, Errors&) {
  const auto& g = c.gl;
  GLDiscretization d;
  try {
    d = assemble_gl(g.grid, g.m, g.nu, g.potential);
  } catch (const Error& e) {
    rethrow_with("assemble_gl", e);
  }
  GLReportOptions o;
  o.y_grid = c.y_grid;
  o.band_tol = c.tol.band_tol;
  o.inertia_tol = c.tol.inertia_tol;
  o.real_tol = c.tol.real_tol;
  o.full_via_T = g.full_via_T;
  o.via_T.threads = threads;
  o.lrg = lrg_options(c, threads);
  GLSpectrumReport r;
  try {
    r = gl_spectrum_report(d, o);
  } catch (const Error& e) {
    rethrow_with("gl_spectrum_report", e);
  }
  add_report_verdicts(v, r.report);

  ojson res;
  res["discretization"] = {{"L", g.grid.half_length},
                           {"n", g.grid.points},
                           {"h", g.grid.spacing()},
                           {"unknowns", g.grid.unknowns()},
                           {"m", g.m},
                           {"nu", g.nu},
                           {"potential", g.potential.describe()},
                           {"kappa_HV", inertia_json(d.kappa_HV)}};
  res["bands"] = bands_json(r.ess_bands);
  res["gap"] = {{"closed_form", r.symbol_spectrum.gap_closed_form},
                {"sweep_hi", r.symbol_spectrum.gap_sweep_hi},
                {"sweep_lo", r.symbol_spectrum.gap_sweep_lo},
                {"min_abs_re_discrete", num(r.min_abs_re)},
                {"band_tol", c.tol.band_tol}};
  res["spectrum"] = {{"count", r.report.eigenvalues_L.size()},
                     {"max_abs_im", r.max_abs_im},
                     {"boundary_artifacts", r.artifact_count},
                     {"eigenvalues", spectrum_json(r.report.eigenvalues_L, r.report.residuals_L)}};
  res["lrg"] = lrg_json(r.report.lrg);
  if (r.kappa) {
    res["kappa"] = {{"A_cal", inertia_json(r.kappa->kappa_Acal)},
                    {"A", inertia_json(r.kappa->kappa_A)},
                    {"S0", inertia_json(r.kappa->kappa_S0)},
                    {"consistent", r.kappa->consistent}};
  } else {
    res["kappa"] = {{"error", r.kappa_error}};
  }
  ojson trows = ojson::array();
  for (const auto& row : r.t_table.rows) {
    trows.push_back({{"z", cnum(row.z)},
                     {"t_inv_norm", num(row.t_inv_norm)},
                     {"a_inv_t_inv_norm", num(row.a_inv_t_inv_norm)},
                     {"bound_t", num(row.bound_t)},
                     {"bound_at", num(row.bound_at)}});
  }
  res["t_necessary"] = {{"rows", trows}, {"K_observed", num(r.t_table.K_observed)}, {"below_K", r.t_table.below_K}};
  ojson route = ojson::array();
  for (const auto& [z, ratio] : r.t_route) route.push_back({{"lambda", cnum(z)}, {"smin_over_tol", num(ratio)}});
  res["t_route"] = {{"points", route}, {"gap_point_smin", num(r.gap_point_smin)}};
  if (r.via_T) {
    ojson roots = ojson::array();
    for (const cplx z : r.via_T->roots) roots.push_back(cnum(z));
    res["via_T"] = {{"roots", roots}, {"seeds_tried", r.via_T->seeds_tried}};
  }
  b.doc["results"] = res;
  b.tables["bands"] = bands_table(r.ess_bands);
  b.tables["lrg"] = lrg_table(r.report.lrg);
  b.tables["spectrum"] = spectrum_table(r.report.eigenvalues_L, r.report.residuals_L, std::nullopt);
  b.doc["provenance"]["truncation"] = true;
  b.doc["provenance"]["boundary"] = "Dirichlet on [-L, L]";
}

std::optional<std::string> timestamp() {
  const char* env = std::getenv("SOURCE_DATE_EPOCH");
  if (env == nullptr || *env == '\0') return std::nullopt;
  long long secs = 0;
  const auto [p, ec] = std::from_chars(env, env + std::char_traits<char>::length(env), secs);
  if (ec != std::errc{} || *p != '\0') return std::nullopt;
  const std::time_t t = static_cast<std::time_t>(secs);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string(buf);
}

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io_error, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::io_error, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::io_error, "cannot rename onto '" + path.string() + "': " + ec.message());
}

}  // namespace

ReportBundle run_scenario(const ScenarioConfig& c) {
  validate_config(c);
  const unsigned threads = resolve_threads(c.threads);
  ReportBundle b;
  b.doc["schema_version"] = kSchemaVersion;
  b.doc["tool"] = {{"name", "blockspec"}, {"version", kToolVersion}};
  if (const auto ts = timestamp()) b.doc["timestamp"] = *ts;
  b.doc["config"] = config_json(c);
  b.doc["results"] = ojson::object();
  b.doc["verdicts"] = ojson::object();
  b.doc["provenance"] = ojson::object();

  Verdicts v;
  Errors err;
  switch (c.kind) {
    case ScenarioKind::blocks: run_blocks(c, threads, b, v, err); break;
    case ScenarioKind::symbol: run_symbol(c, b, v, err); break;
    case ScenarioKind::dsum: run_dsum(c, b, v, err); break;
    case ScenarioKind::gl: run_gl(c, threads, b, v, err); break;
  }
  b.doc["verdicts"] = v.obj;
  b.doc["provenance"]["one_sided"] = v.one_sided;
  b.doc["errors"] = err.list;
  bool all = true;
  for (const auto& [name, entry] : v.obj.items()) all = all && entry["pass"].get<bool>();
  b.doc["summary"] = {{"verdicts", v.obj.size()}, {"all_pass", all}, {"errors", err.list.size()}};
  return b;
}

std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, p);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string csv_text(const CsvTable& t) {
  std::string out;
  for (std::size_t k = 0; k < t.header.size(); ++k) out += (k ? "," : "") + t.header[k];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + csv_number(row[k]);
    out += '\n';
  }
  return out;
}

void emit(const ReportBundle& b, const std::string& out_dir, const EmitOptions& opts) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::io_error, "cannot create '" + out_dir + "': " + ec.message());
  if (opts.json) write_atomic(fs::path(out_dir) / "report.json", b.doc.dump(2) + "\n");
  if (opts.csv) {
    for (const auto& [stem, table] : b.tables) write_atomic(fs::path(out_dir) / (stem + ".csv"), csv_text(table));
  }
}

nlohmann::ordered_json load_bundle(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot read bundle '" + path + "'");
  try {
    return ojson::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse_error, "bundle '" + path + "': " + e.what());
  }
}

std::map<std::string, bool> bundle_verdicts(const nlohmann::ordered_json& doc) {
  std::map<std::string, bool> out;
  if (!doc.contains("verdicts")) return out;
  for (const auto& [name, entry] : doc["verdicts"].items()) out[name] = entry.at("pass").get<bool>();
  return out;
}

}  // namespace blockspec
