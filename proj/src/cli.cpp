#include "nltrefftz/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "nltrefftz/bvp1d.hpp"
#include "nltrefftz/errors.hpp"
#include "nltrefftz/io.hpp"
#include "nltrefftz/metrics.hpp"
#include "nltrefftz/nlconv.hpp"
#include "nltrefftz/report.hpp"
#include "nltrefftz/trefftz.hpp"

namespace nltrefftz::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kPaperD1 = -0.3944;
constexpr double kPaperD2 = -0.6553;
constexpr double kPaddingTol = 1.5229979744712628e-08;  // exp(-18)

struct Common {
  std::string out = "out";
  bool plot = false;
  std::string preset = "paper";
  std::string config;
};

struct Switches {
  std::string apply_conv_in = "not-applicable";
  std::string include_local_term = "not-applicable";
  std::string constraint_indexing = "not-applicable";

  json to_json() const {
    return {{"apply_conv_in", apply_conv_in},
            {"include_local_term", include_local_term},
            {"constraint_indexing", constraint_indexing}};
  }
  std::vector<std::string> lines() const {
    return {"apply_conv_in=" + apply_conv_in, "include_local_term=" + include_local_term,
            "constraint_indexing=" + constraint_indexing};
  }
};

json load_config(const Common& c, std::initializer_list<const char*> allowed, const std::string& where) {
  if (c.config.empty()) return json::object();
  std::ifstream f(c.config);
  if (!f) throw ConfigError("cannot read config file '" + c.config + "'");
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
  }
  require_known_keys(j, allowed, where);
  return j;
}

template <class T>
void take(const json& j, const char* key, T& target) {
  if (!j.contains(key)) return;
  try {
    target = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

void take_point(const json& j, const char* key, Point& target) {
  if (j.contains(key)) target = point_from_json(j.at(key));
}

std::vector<std::string> metadata_lines(const std::string& subcommand, const Common& c, const Switches& s) {
  std::vector<std::string> lines{"subcommand=" + subcommand, "preset=" + c.preset};
  for (auto& l : s.lines()) lines.push_back(l);
  return lines;
}

json metadata_json(const std::string& subcommand, const Common& c, const Switches& s) {
  return {{"subcommand", subcommand}, {"preset", c.preset}, {"switches", s.to_json()}};
}

void write_json(const fs::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

std::vector<Point> grid_points(const Box& box, int n) {
  std::vector<Point> pts;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      pts.push_back({box.lo.x + (box.hi.x - box.lo.x) * i / (n - 1), box.lo.y + (box.hi.y - box.lo.y) * j / (n - 1)});
  return pts;
}

// ---------------------------------------------------------------- bvp1d

struct BvpParams {
  double a = -5, b = 5, c = -1, d = 1, sigma = 1, eps_loc = 1, eps_nl = 10, u_a = 0, u_b = 1;
  int n_cells = 64;
  int max_cells = 2048;
  double target_rel_change = 1e-4;
};

int run_bvp1d(const Common& common, const std::string& variant_flag, const std::string& apply_flag,
              std::ostream& out) {
  const json cfg_json = load_config(common,
                                    {"a", "b", "c", "d", "sigma", "eps_loc", "eps_nl", "u_a", "u_b", "n_cells",
                                     "max_cells", "target_rel_change"},
                                    "bvp1d config");
  BvpParams p;
  take(cfg_json, "a", p.a);
  take(cfg_json, "b", p.b);
  take(cfg_json, "c", p.c);
  take(cfg_json, "d", p.d);
  take(cfg_json, "sigma", p.sigma);
  take(cfg_json, "eps_loc", p.eps_loc);
  take(cfg_json, "eps_nl", p.eps_nl);
  take(cfg_json, "u_a", p.u_a);
  take(cfg_json, "u_b", p.u_b);
  take(cfg_json, "n_cells", p.n_cells);
  take(cfg_json, "max_cells", p.max_cells);
  take(cfg_json, "target_rel_change", p.target_rel_change);

  std::vector<ConvVariant> variants;
  if (variant_flag != "nonlocal-only") variants.push_back(ConvVariant::WholeDomain);
  if (variant_flag != "whole-domain") variants.push_back(ConvVariant::NonlocalOnly);
  std::vector<ApplyConvIn> applies;
  if (apply_flag != "nonlocal-region") applies.push_back(ApplyConvIn::Everywhere);
  if (apply_flag != "everywhere") applies.push_back(ApplyConvIn::NonlocalRegionOnly);

  Switches sw;
  sw.apply_conv_in = apply_flag;
  json meta = metadata_json("bvp1d", common, sw);
  meta["config"] = {{"a", p.a},           {"b", p.b},         {"c", p.c},
                    {"d", p.d},           {"sigma", p.sigma}, {"eps_loc", p.eps_loc},
                    {"eps_nl", p.eps_nl}, {"u_a", p.u_a},     {"u_b", p.u_b},
                    {"n_cells", p.n_cells}, {"max_cells", p.max_cells}, {"target_rel_change", p.target_rel_change}};
  meta["paper_reference"] = {{"whole-domain", kPaperD1}, {"nonlocal-only", kPaperD2}, {"tolerance", 0.05}};
  json results = json::array();
  std::map<std::string, std::map<std::string, double>> d_by_apply;
  bool all_converged = true;

  for (const ApplyConvIn apply : applies) {
    std::vector<PlotSeries> u_series, e_series;
    for (const ConvVariant variant : variants) {
      BvpConfig cfg;
      cfg.a = p.a, cfg.b = p.b, cfg.c = p.c, cfg.d = p.d;
      cfg.kernel = make_gaussian(p.sigma, 1);
      cfg.eps_loc = p.eps_loc, cfg.eps_nl = p.eps_nl;
      cfg.u_a = p.u_a, cfg.u_b = p.u_b;
      cfg.n_cells = p.n_cells;
      cfg.variant = variant;
      cfg.apply_conv_in = apply;
      const RefinementResult r = refine_until(cfg, p.target_rel_change, p.max_cells);
      all_converged = all_converged && r.converged;
      const BvpSolution& s = r.solution;
      const std::string tag = to_string(variant) + "_" + to_string(apply);

      std::vector<std::vector<double>> rows;
      for (std::size_t j = 0; j < s.e_field.size(); ++j)
        rows.push_back({s.midpoints[j], 0.5 * (s.potential[j] + s.potential[j + 1]), s.e_field[j]});
      auto lines = metadata_lines("bvp1d", common, sw);
      lines.push_back("variant=" + to_string(variant));
      lines.push_back("apply_conv_in_used=" + to_string(apply));
      lines.push_back("D=" + format_double(s.d_value));
      lines.push_back("n_cells=" + std::to_string(s.e_field.size()));
      lines.push_back(std::string("converged=") + (r.converged ? "true" : "false"));
      write_text_file(fs::path(common.out) / ("bvp1d_" + tag + ".csv"), csv_document(lines, {"x", "u", "E"}, rows));

      json hist = json::array();
      for (const auto& [n, dv] : r.history) hist.push_back({{"n_cells", n}, {"D", dv}});
      results.push_back({{"variant", to_string(variant)},
                         {"apply_conv_in", to_string(apply)},
                         {"D", s.d_value},
                         {"n_cells", s.e_field.size()},
                         {"converged", r.converged},
                         {"residual", s.residual},
                         {"inclusion_snapped", {s.c_snapped, s.d_snapped}},
                         {"history", hist}});
      d_by_apply[to_string(apply)][to_string(variant)] = s.d_value;
      out << "bvp1d " << to_string(variant) << " apply_conv_in=" << to_string(apply) << " D=" << format_double(s.d_value)
          << " n_cells=" << s.e_field.size() << (r.converged ? "" : " (not converged)") << "\n";

      if (common.plot) {
        std::vector<double> xs, us, es;
        for (const auto& row : rows) xs.push_back(row[0]), us.push_back(row[1]), es.push_back(row[2]);
        u_series.push_back({to_string(variant), xs, us});
        e_series.push_back({to_string(variant), xs, es});
      }
    }
    if (common.plot) {
      write_text_file(fs::path(common.out) / ("bvp1d_u_" + to_string(apply) + ".svg"),
                      svg_line_plot("potential u(x), apply_conv_in=" + to_string(apply), "x", "u", u_series));
      write_text_file(fs::path(common.out) / ("bvp1d_E_" + to_string(apply) + ".svg"),
                      svg_line_plot("field E(x), apply_conv_in=" + to_string(apply), "x", "E", e_series));
    }
  }
  meta["results"] = results;

  json comparison = json::array();
  for (const auto& [apply, ds] : d_by_apply) {
    json entry = {{"apply_conv_in", apply}};
    bool within = true;
    if (ds.count("whole-domain")) {
      const double rel = std::abs(ds.at("whole-domain") - kPaperD1) / std::abs(kPaperD1);
      entry["whole_domain_rel_dev"] = rel;
      within = within && rel <= 0.05;
    } else {
      within = false;
    }
    if (ds.count("nonlocal-only")) {
      const double rel = std::abs(ds.at("nonlocal-only") - kPaperD2) / std::abs(kPaperD2);
      entry["nonlocal_only_rel_dev"] = rel;
      within = within && rel <= 0.05;
    } else {
      within = false;
    }
    if (ds.count("whole-domain") && ds.count("nonlocal-only"))
      entry["ratio_nonlocal_over_whole"] = ds.at("nonlocal-only") / ds.at("whole-domain");
    entry["reproduces_reference_within_5pct"] = within;
    comparison.push_back(entry);
  }
  meta["reference_comparison"] = comparison;
  write_json(fs::path(common.out) / "bvp1d.json", meta);
  return all_converged ? kExitOk : kExitNumerical;
}

// ---------------------------------------------------------------- trefftz1d

int run_trefftz1d(const Common& common, std::ostream& out) {
  const json j = load_config(common,
                             {"sigma", "eps_loc", "eps_nl", "x0", "n_max", "m", "trefftz_half_width", "conv_lo",
                              "conv_hi", "constraint_indexing", "samples", "sample_lo", "sample_hi"},
                             "trefftz1d config");
  double sigma = 0.5, eps_loc = 1, eps_nl = 10, x0 = 1, half = 0.5, conv_lo = 0.0, sample_lo = 0.0, sample_hi = 2.0;
  int n_max = 4, m = 1, samples = 201;
  std::string indexing = "up-to-m";
  take(j, "sigma", sigma);
  take(j, "eps_loc", eps_loc);
  take(j, "eps_nl", eps_nl);
  take(j, "x0", x0);
  take(j, "n_max", n_max);
  take(j, "m", m);
  take(j, "trefftz_half_width", half);
  take(j, "conv_lo", conv_lo);
  take(j, "constraint_indexing", indexing);
  take(j, "samples", samples);
  take(j, "sample_lo", sample_lo);
  take(j, "sample_hi", sample_hi);
  if (samples < 2) throw ConfigError("samples must be >= 2");

  ConvConfig cfg;
  cfg.eps_loc = eps_loc;
  cfg.eps_nl = eps_nl;
  cfg.kernel = make_gaussian(sigma, 1);
  double conv_hi = x0 + half + truncation_radius(cfg.kernel, kPaddingTol);
  take(j, "conv_hi", conv_hi);
  cfg.conv_domain = interval_domain(conv_lo, conv_hi);
  const Box tdom{{x0 - half, 0.0}, {x0 + half, 0.0}};
  const TrefftzSet ts = build_trefftz_bulk(cfg, n_max, {x0, 0.0}, m, tdom, {constraint_indexing_from_string(indexing)});

  std::vector<Point> pts;
  for (int i = 0; i < samples; ++i) pts.push_back({sample_lo + (sample_hi - sample_lo) * i / (samples - 1), 0.0});
  std::vector<std::string> header{"x"};
  std::vector<std::vector<double>> rows(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) rows[i].push_back(pts[i].x);
  std::vector<PlotSeries> us, es, ds;
  for (Eigen::Index f = 0; f < ts.size(); ++f) {
    const auto u = evaluate_trefftz(ts, f, FieldKind::U, pts);
    const auto e = evaluate_trefftz(ts, f, FieldKind::E, pts);
    const auto d = evaluate_trefftz(ts, f, FieldKind::D, pts);
    const std::string k = std::to_string(f);
    header.insert(header.end(), {"u" + k, "E" + k, "D" + k});
    PlotSeries su{"u" + k, {}, {}}, se{"E" + k, {}, {}}, sd{"D" + k, {}, {}};
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      rows[i].insert(rows[i].end(), {u(r, 0), e(r, 0), d(r, 0)});
      su.x.push_back(pts[i].x), su.y.push_back(u(r, 0));
      se.x.push_back(pts[i].x), se.y.push_back(e(r, 0));
      sd.x.push_back(pts[i].x), sd.y.push_back(d(r, 0));
    }
    us.push_back(su), es.push_back(se), ds.push_back(sd);
  }
  Switches sw;
  sw.constraint_indexing = indexing;
  auto lines = metadata_lines("trefftz1d", common, sw);
  lines.push_back("n_funcs=" + std::to_string(ts.size()));
  write_text_file(fs::path(common.out) / "trefftz1d.csv", csv_document(lines, header, rows));
  json meta = metadata_json("trefftz1d", common, sw);
  meta["config"] = {{"sigma", sigma}, {"eps_loc", eps_loc}, {"eps_nl", eps_nl}, {"x0", x0},
                    {"n_max", n_max}, {"m", m}, {"trefftz_half_width", half}, {"conv_lo", conv_lo},
                    {"conv_hi", conv_hi}, {"samples", samples}, {"sample_lo", sample_lo}, {"sample_hi", sample_hi}};
  meta["trefftz_set"] = to_json(ts);
  write_json(fs::path(common.out) / "trefftz1d.json", meta);
  if (common.plot) {
    write_text_file(fs::path(common.out) / "trefftz1d_u.svg", svg_line_plot("pseudoharmonic u(x)", "x", "u", us));
    write_text_file(fs::path(common.out) / "trefftz1d_E.svg", svg_line_plot("E(x)", "x", "E", es));
    write_text_file(fs::path(common.out) / "trefftz1d_D.svg", svg_line_plot("D(x)", "x", "D", ds));
  }
  out << "trefftz1d: " << ts.size() << " pseudoharmonic functions (n_max=" << n_max << ", m=" << m << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------- 2D field dumps

void dump_fields_2d(const Common& common, const std::string& name, const TrefftzSet& ts, const Box& grid_box,
                    int grid, const Switches& sw, json meta) {
  const auto pts = grid_points(grid_box, grid);
  std::vector<std::vector<double>> rows;
  for (Eigen::Index f = 0; f < ts.size(); ++f) {
    const auto u = evaluate_trefftz(ts, f, FieldKind::U, pts);
    const auto e = evaluate_trefftz(ts, f, FieldKind::E, pts);
    const auto d = evaluate_trefftz(ts, f, FieldKind::D, pts);
    const auto div = evaluate_trefftz(ts, f, FieldKind::DivD, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      rows.push_back({static_cast<double>(f), pts[i].x, pts[i].y, u(r, 0), e(r, 0), e(r, 1), d(r, 0), d(r, 1),
                      div(r, 0)});
    }
    if (common.plot) {
      const std::array<std::pair<const char*, int>, 6> fields{
          {{"u", 3}, {"Ex", 4}, {"Ey", 5}, {"Dx", 6}, {"Dy", 7}, {"divD", 8}}};
      for (const auto& [label, col] : fields) {
        std::vector<double> vals;
        for (std::size_t i = 0; i < pts.size(); ++i) vals.push_back(rows[rows.size() - pts.size() + i][col]);
        write_text_file(fs::path(common.out) / (name + "_f" + std::to_string(f) + "_" + label + ".svg"),
                        svg_heatmap(name + " function " + std::to_string(f) + ": " + label, grid, grid, grid_box, vals));
      }
    }
  }
  auto lines = metadata_lines(name, common, sw);
  lines.push_back("n_funcs=" + std::to_string(ts.size()));
  write_text_file(fs::path(common.out) / (name + ".csv"),
                  csv_document(lines, {"func", "x", "y", "u", "Ex", "Ey", "Dx", "Dy", "divD"}, rows));
  meta["trefftz_set"] = to_json(ts);
  write_json(fs::path(common.out) / (name + ".json"), meta);
}

int run_trefftz2d(const Common& common, std::ostream& out) {
  const json j = load_config(common,
                             {"sigma", "eps_loc", "eps_nl", "x0", "n_max", "m", "omega_a_half", "trefftz_half",
                              "constraint_indexing", "grid", "grid_half"},
                             "trefftz2d config");
  double sigma = 0.5, eps_loc = 1, eps_nl = 10;
  Point x0{0, 0};
  int n_max = 4, m = 2, grid = 41;
  std::string indexing = "up-to-m";
  take(j, "sigma", sigma);
  double omega_a_half = 6 * sigma, trefftz_half = sigma, grid_half = 2 * sigma;
  take(j, "eps_loc", eps_loc);
  take(j, "eps_nl", eps_nl);
  take_point(j, "x0", x0);
  take(j, "n_max", n_max);
  take(j, "m", m);
  take(j, "omega_a_half", omega_a_half);
  take(j, "trefftz_half", trefftz_half);
  take(j, "constraint_indexing", indexing);
  take(j, "grid", grid);
  take(j, "grid_half", grid_half);
  if (grid < 2) throw ConfigError("grid must be >= 2");

  ConvConfig cfg;
  cfg.eps_loc = eps_loc;
  cfg.eps_nl = eps_nl;
  cfg.kernel = make_gaussian(sigma, 2);
  cfg.conv_domain = box_domain({{x0.x - omega_a_half, x0.y - omega_a_half}, {x0.x + omega_a_half, x0.y + omega_a_half}});
  const Box tdom{{x0.x - trefftz_half, x0.y - trefftz_half}, {x0.x + trefftz_half, x0.y + trefftz_half}};
  const TrefftzSet ts = build_trefftz_bulk(cfg, n_max, x0, m, tdom, {constraint_indexing_from_string(indexing)});

  Switches sw;
  sw.constraint_indexing = indexing;
  json meta = metadata_json("trefftz2d", common, sw);
  meta["config"] = {{"sigma", sigma}, {"eps_loc", eps_loc}, {"eps_nl", eps_nl}, {"x0", to_json(x0)},
                    {"n_max", n_max}, {"m", m}, {"omega_a_half", omega_a_half}, {"trefftz_half", trefftz_half},
                    {"grid", grid}, {"grid_half", grid_half}};
  const Box grid_box{{x0.x - grid_half, x0.y - grid_half}, {x0.x + grid_half, x0.y + grid_half}};
  dump_fields_2d(common, "trefftz2d", ts, grid_box, grid, sw, meta);
  out << "trefftz2d: " << ts.size() << " pseudoharmonic functions (n_max=" << n_max << ", m=" << m << ")\n";
  return kExitOk;
}

int run_interface2d(const Common& common, std::ostream& out) {
  const json j = load_config(common,
                             {"sigma", "eps_loc", "eps_nl", "eps_loc_local", "x0", "n_max", "m", "p_max",
                              "trefftz_half", "constraint_indexing", "grid", "grid_half"},
                             "interface2d config");
  double sigma = 0.5, eps_loc = 1, eps_nl = 10, eps_loc_local = 1;
  int n_max = 4, m = 2, p_max = 2, grid = 41;
  std::string indexing = "up-to-m";
  take(j, "sigma", sigma);
  Point x0{sigma / 2, 0.0};
  double trefftz_half = sigma, grid_half = 2 * sigma;
  take(j, "eps_loc", eps_loc);
  take(j, "eps_nl", eps_nl);
  take(j, "eps_loc_local", eps_loc_local);
  take_point(j, "x0", x0);
  take(j, "n_max", n_max);
  take(j, "m", m);
  take(j, "p_max", p_max);
  take(j, "trefftz_half", trefftz_half);
  take(j, "constraint_indexing", indexing);
  take(j, "grid", grid);
  take(j, "grid_half", grid_half);
  if (grid < 2) throw ConfigError("grid must be >= 2");

  ConvConfig cfg;
  cfg.eps_loc = eps_loc;
  cfg.eps_nl = eps_nl;
  cfg.kernel = make_gaussian(sigma, 2);
  const Box tdom{{-trefftz_half, -trefftz_half}, {trefftz_half, trefftz_half}};
  cfg.conv_domain = interface_conv_domain(tdom, cfg.kernel);
  InterfaceOptions opts;
  opts.x0 = x0;
  opts.trefftz_domain = tdom;
  opts.indexing = constraint_indexing_from_string(indexing);
  const TrefftzSet ts = build_trefftz_interface_2d(cfg, eps_loc_local, n_max, m, p_max, opts);

  Switches sw;
  sw.constraint_indexing = indexing;
  json meta = metadata_json("interface2d", common, sw);
  meta["config"] = {{"sigma", sigma}, {"eps_loc", eps_loc}, {"eps_nl", eps_nl}, {"eps_loc_local", eps_loc_local},
                    {"x0", to_json(x0)}, {"n_max", n_max}, {"m", m}, {"p_max", p_max},
                    {"trefftz_half", trefftz_half}, {"grid", grid}, {"grid_half", grid_half}};
  const Box grid_box{{-grid_half, -grid_half}, {grid_half, grid_half}};
  dump_fields_2d(common, "interface2d", ts, grid_box, grid, sw, meta);
  out << "interface2d: " << ts.size() << " glued pseudoharmonic functions (n_max=" << n_max << ", m=" << m
      << ", p_max=" << p_max << ")\n";
  return kExitOk;
}

// ---------------------------------------------------------------- converge

int run_converge(const Common& common, bool include_local_flag, std::ostream& out) {
  const json j = load_config(common,
                             {"sigma", "eps_loc", "eps_nl", "n_max_list", "m_max", "m_capped", "omega_a_half",
                              "omega_t_half", "quad_points", "include_local_term", "constraint_indexing"},
                             "converge config");
  double sigma = 0.5, eps_loc = 1, eps_nl = 10;
  std::vector<int> n_max_list{0, 1, 2, 3, 4};
  MRule rule;
  int quad_points = 24;
  bool include_local = include_local_flag;
  std::string indexing = "up-to-m";
  take(j, "sigma", sigma);
  double omega_a_half = 6 * sigma, omega_t_half = sigma;
  take(j, "eps_loc", eps_loc);
  take(j, "eps_nl", eps_nl);
  take(j, "n_max_list", n_max_list);
  take(j, "m_max", rule.m_max);
  take(j, "m_capped", rule.capped);
  take(j, "omega_a_half", omega_a_half);
  take(j, "omega_t_half", omega_t_half);
  take(j, "quad_points", quad_points);
  take(j, "include_local_term", include_local);
  take(j, "constraint_indexing", indexing);

  ConvConfig cfg;
  cfg.eps_loc = eps_loc;
  cfg.eps_nl = eps_nl;
  cfg.kernel = make_gaussian(sigma, 2);
  const Box omega_a{{-omega_a_half, -omega_a_half}, {omega_a_half, omega_a_half}};
  const Box omega_t{{-omega_t_half, -omega_t_half}, {omega_t_half, omega_t_half}};
  cfg.conv_domain = box_domain(omega_a);
  ConvergenceOptions opts;
  opts.include_local_term = include_local;
  opts.quad_points = quad_points;
  opts.indexing = constraint_indexing_from_string(indexing);
  const ConvergenceReport rep = convergence_study(cfg, n_max_list, rule, omega_a, omega_t, {0, 0}, opts);

  Switches sw;
  sw.include_local_term = include_local ? "true" : "false";
  sw.constraint_indexing = indexing;
  std::vector<std::vector<double>> rows;
  json jrows = json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({static_cast<double>(r.n_max), static_cast<double>(r.n_funcs_trefftz), r.error_trefftz,
                    static_cast<double>(r.n_funcs_taylor), r.error_taylor});
    jrows.push_back({{"n_max", r.n_max},
                     {"m", r.m},
                     {"n_funcs_trefftz", r.n_funcs_trefftz},
                     {"err_trefftz", r.error_trefftz},
                     {"n_funcs_taylor", r.n_funcs_taylor},
                     {"err_taylor", r.error_taylor}});
    out << "converge n_max=" << r.n_max << " trefftz(" << r.n_funcs_trefftz << ")=" << format_double(r.error_trefftz)
        << " taylor(" << r.n_funcs_taylor << ")=" << format_double(r.error_taylor) << "\n";
  }
  auto lines = metadata_lines("converge", common, sw);
  lines.push_back("target=" + rep.target);
  lines.push_back("norm=" + rep.norm);
  lines.push_back("m_rule=min(m_max, n_max - 2) capped=" + std::string(rule.capped ? "true" : "false") +
                  " m_max=" + std::to_string(rule.m_max));
  write_text_file(fs::path(common.out) / "converge.csv",
                  csv_document(lines, {"n_max", "n_funcs_trefftz", "err_trefftz", "n_funcs_taylor", "err_taylor"}, rows));
  json meta = metadata_json("converge", common, sw);
  meta["config"] = {{"sigma", sigma}, {"eps_loc", eps_loc}, {"eps_nl", eps_nl}, {"n_max_list", n_max_list},
                    {"m_max", rule.m_max}, {"m_capped", rule.capped}, {"omega_a", to_json(omega_a)},
                    {"omega_t", to_json(omega_t)}, {"quad_points", quad_points}, {"x0", to_json(Point{0, 0})}};
  meta["target"] = rep.target;
  meta["norm"] = rep.norm;
  meta["rows"] = jrows;
  write_json(fs::path(common.out) / "converge.json", meta);
  if (common.plot) {
    PlotSeries tr{"Trefftz", {}, {}}, ta{"Taylor", {}, {}};
    for (const auto& r : rep.rows) {
      tr.x.push_back(static_cast<double>(r.n_funcs_trefftz)), tr.y.push_back(r.error_trefftz);
      ta.x.push_back(static_cast<double>(r.n_funcs_taylor)), ta.y.push_back(r.error_taylor);
    }
    write_text_file(fs::path(common.out) / "converge.svg",
                    svg_line_plot("approximation error vs number of functions", "number of functions", "error",
                                  {tr, ta}, true));
  }
  return kExitOk;
}

// ---------------------------------------------------------------- selftest

struct Check {
  std::string name;
  double value;
  double expected;
  double tol;
  bool relative;

  double error() const {
    const double e = std::abs(value - expected);
    return relative ? e / std::max(std::abs(expected), 1e-300) : e;
  }
  bool pass() const { return error() <= tol; }
};

int run_selftest(const Common& common, std::ostream& out) {
  load_config(common, {}, "selftest config");
  std::vector<Check> checks;
  const ConvDomain unit = interval_domain(0.0, 1.0);
  const Kernel one = make_poly_test(Polynomial::constant(1, 1.0));
  const Kernel ramp = make_poly_test(Polynomial::monomial(1, {1, 0}));
  const Polynomial f_x = Polynomial::monomial(1, {1, 0});
  const Polynomial f_one = Polynomial::constant(1, 1.0);
  for (double x : {-0.5, 0.25, 2.0}) {
    const std::string at = "(x=" + format_double(x) + ")";
    checks.push_back({"1 *_[0,1] x " + at, conv_restricted(one, f_x, unit, {x, 0}), 0.5, 1e-12, false});
    checks.push_back({"x *_[0,1] 1 " + at, conv_restricted(ramp, f_one, unit, {x, 0}), x - 0.5, 1e-12, false});
    checks.push_back({"d/dx (x *_[0,1] 1) " + at, conv_restricted(ramp, f_one, unit, {x, 0}, {1, 0}), 1.0, 1e-12, false});
    checks.push_back({"x *_[0,1] d/dx 1 " + at, conv_restricted(ramp, poly_partial(f_one, {1, 0}), unit, {x, 0}), 0.0,
                      1e-12, false});
  }
  const std::array<std::tuple<double, int, double, double, double, double>, 4> cases{
      {{0.5, 0, -1.0, 2.5, 0.3, 0.0}, {1.0, 3, -2.0, 1.0, 0.1, -2.5}, {0.25, 6, 0.0, 1.0, 0.4, -0.2},
       {0.5, 4, 1.0, 3.0, 2.2, 0.5}}};
  for (const auto& [s, pw, a, b, x, c] : cases) {
    const Kernel g = make_gaussian(s, 1);
    const Polynomial mono = Polynomial::monomial(1, {pw, 0}, {c, 0});
    checks.push_back({"gaussian quadrature vs closed form (sigma=" + format_double(s) + ", p=" + std::to_string(pw) + ")",
                      conv_restricted(g, mono, interval_domain(a, b), {x, 0}), conv_gaussian_analytic(s, pw, a, b, x, c),
                      1e-10, true});
  }
  const Kernel g1 = make_gaussian(1.0, 1);
  checks.push_back({"gaussian full-line integral", conv_restricted(g1, f_one, interval_domain(-7.5, 8.5), {0.5, 0}),
                    std::sqrt(2.0 * M_PI), 1e-12, true});

  bool ok = true;
  std::string csv = "# subcommand=selftest\n# preset=" + common.preset + "\n";
  Switches sw;
  for (const auto& l : sw.lines()) csv += "# " + l + "\n";
  csv += "check,value,expected,error,tolerance,pass\n";
  for (const auto& c : checks) {
    ok = ok && c.pass();
    out << (c.pass() ? "PASS " : "FAIL ") << c.name << ": " << format_double(c.value) << " (expected "
        << format_double(c.expected) << ")\n";
    csv += "\"" + c.name + "\"," + format_double(c.value) + "," + format_double(c.expected) + "," +
           format_double(c.error()) + "," + format_double(c.tol) + "," + (c.pass() ? "1" : "0") + "\n";
  }
  write_text_file(fs::path(common.out) / "selftest.csv", csv);
  json meta = metadata_json("selftest", common, sw);
  meta["checks"] = checks.size();
  meta["all_passed"] = ok;
  write_json(fs::path(common.out) / "selftest.json", meta);
  return ok ? kExitOk : kExitNumerical;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out,-o", c.out, "output directory")->capture_default_str();
  sub->add_flag("--plot", c.plot, "also write SVG plots");
  sub->add_option("--preset", c.preset, "parameter preset")->check(CLI::IsMember({"paper"}))->capture_default_str();
  sub->add_option("--config", c.config, "JSON document overriding preset values (unknown keys are rejected)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quasi-Trefftz basis construction for nonlocal electrostatics"};
  app.require_subcommand(1);
  Common common;

  auto* bvp = app.add_subcommand("bvp1d", "1D two-point problem with restricted-domain convolution");
  add_common(bvp, common);
  std::string variant = "both", apply = "both";
  bvp->add_option("--variant", variant)->check(CLI::IsMember({"whole-domain", "nonlocal-only", "both"}))->capture_default_str();
  bvp->add_option("--apply-conv-in", apply)
      ->check(CLI::IsMember({"everywhere", "nonlocal-region", "both"}))
      ->capture_default_str();

  auto* t1 = app.add_subcommand("trefftz1d", "1D pseudoharmonic functions and their u, E, D profiles");
  add_common(t1, common);
  auto* t2 = app.add_subcommand("trefftz2d", "2D bulk pseudoharmonic functions sampled on a grid");
  add_common(t2, common);
  auto* itf = app.add_subcommand("interface2d", "2D local/nonlocal glued pseudoharmonic functions");
  add_common(itf, common);
  auto* conv = app.add_subcommand("converge", "Trefftz vs Taylor approximation errors");
  add_common(conv, common);
  bool include_local = false;
  conv->add_flag("--include-local-term", include_local, "use eps_loc E + eps_nl (kernel * E) for the Trefftz D-fields");
  auto* self = app.add_subcommand("selftest", "restricted-convolution identities and oracle cross-checks");
  add_common(self, common);

  std::vector<const char*> argv{"nltrefftz"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (bvp->parsed()) return run_bvp1d(common, variant, apply, out);
    if (t1->parsed()) return run_trefftz1d(common, out);
    if (t2->parsed()) return run_trefftz2d(common, out);
    if (itf->parsed()) return run_interface2d(common, out);
    if (conv->parsed()) return run_converge(common, include_local, out);
    if (self->parsed()) return run_selftest(common, out);
  } catch (const NumericalFailure& e) {
    err << "error: numerical: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const UnsupportedOperation& e) {
    err << "error: config: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: config: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: runtime: " << e.what() << "\n";
    return kExitNumerical;
  }
  err << "error: usage: no subcommand\n";
  return kExitUsage;
}

}  // namespace nltrefftz::cli
