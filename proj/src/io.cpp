#include "nltrefftz/io.hpp"

#include <algorithm>
#include <cstring>

#include "nltrefftz/errors.hpp"

namespace nltrefftz {

namespace {

template <class T>
T get(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + ": bad value for '" + key + "': " + e.what());
  }
}

std::string basis_kind_name(BasisKind k) { return k == BasisKind::Monomial ? "monomial" : "glued"; }

}  // namespace

void require_known_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
    if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

json to_json(Point p) { return json::array({p.x, p.y}); }

Point point_from_json(const json& j) {
  if (!j.is_array() || j.size() < 1 || j.size() > 2) throw ConfigError("point must be an array of 1 or 2 numbers");
  try {
    return {j[0].get<double>(), j.size() == 2 ? j[1].get<double>() : 0.0};
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad point: ") + e.what());
  }
}

json to_json(const Box& b) { return {{"lo", to_json(b.lo)}, {"hi", to_json(b.hi)}}; }

Box box_from_json(const json& j) {
  require_known_keys(j, {"lo", "hi"}, "box");
  return {point_from_json(j.at("lo")), point_from_json(j.at("hi"))};
}

json to_json(const Polynomial& p) {
  return {{"dim", p.dim()},
          {"degree", p.degree()},
          {"center", to_json(p.center())},
          {"coeffs", std::vector<double>(p.coeffs().begin(), p.coeffs().end())}};
}

Polynomial polynomial_from_json(const json& j) {
  require_known_keys(j, {"dim", "degree", "center", "coeffs"}, "polynomial");
  const int dim = get<int>(j, "dim", "polynomial");
  const int degree = get<int>(j, "degree", "polynomial");
  const auto coeffs = get<std::vector<double>>(j, "coeffs", "polynomial");
  Polynomial p(dim, degree, point_from_json(j.at("center")));
  const auto idx = graded_multi_indices(dim, degree);
  if (coeffs.size() != idx.size()) throw ConfigError("polynomial: coefficient count does not match degree");
  for (std::size_t i = 0; i < idx.size(); ++i) p.set_coeff(idx[i], coeffs[i]);
  return p;
}

json to_json(const Kernel& k) {
  if (const auto* g = std::get_if<GaussianKernel>(&k.shape))
    return {{"type", "gaussian"}, {"dim", k.dim}, {"sigma", g->sigma}};
  if (const auto* y = std::get_if<YukawaKernel>(&k.shape))
    return {{"type", "yukawa"},
            {"dim", k.dim},
            {"lambda", y->lambda},
            {"prefactor", y->prefactor == YukawaPrefactor::SI ? "si" : "gaussian"}};
  const auto& p = std::get<PolyTestKernel>(k.shape);
  return {{"type", "poly-test"}, {"dim", k.dim}, {"polynomial", to_json(p.p)}};
}

Kernel kernel_from_json(const json& j) {
  const auto type = get<std::string>(j, "type", "kernel");
  try {
    if (type == "gaussian") {
      require_known_keys(j, {"type", "dim", "sigma"}, "kernel");
      return make_gaussian(get<double>(j, "sigma", "kernel"), get<int>(j, "dim", "kernel"));
    }
    if (type == "yukawa") {
      require_known_keys(j, {"type", "dim", "lambda", "prefactor"}, "kernel");
      const auto pref = get<std::string>(j, "prefactor", "kernel");
      if (pref != "si" && pref != "gaussian") throw ConfigError("kernel: prefactor must be 'si' or 'gaussian'");
      return make_yukawa(get<double>(j, "lambda", "kernel"),
                         pref == "si" ? YukawaPrefactor::SI : YukawaPrefactor::Gaussian, get<int>(j, "dim", "kernel"));
    }
    if (type == "poly-test") {
      require_known_keys(j, {"type", "dim", "polynomial"}, "kernel");
      return make_poly_test(polynomial_from_json(j.at("polynomial")));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("kernel: ") + e.what());
  }
  throw ConfigError("kernel: unknown type '" + type + "'");
}

json to_json(const ConvDomain& d) {
  json boxes = json::array();
  for (const Box& b : d.boxes) boxes.push_back(to_json(b));
  return {{"dim", d.dim}, {"boxes", boxes}};
}

ConvDomain conv_domain_from_json(const json& j) {
  require_known_keys(j, {"dim", "boxes"}, "conv_domain");
  ConvDomain d;
  d.dim = get<int>(j, "dim", "conv_domain");
  for (const auto& b : j.at("boxes")) d.boxes.push_back(box_from_json(b));
  return d;
}

json to_json(const ConvConfig& c) {
  return {{"eps_loc", c.eps_loc},
          {"eps_nl", c.eps_nl},
          {"kernel", to_json(c.kernel)},
          {"conv_domain", to_json(c.conv_domain)},
          {"quad_points_per_sigma", c.quad_points_per_sigma}};
}

ConvConfig conv_config_from_json(const json& j) {
  require_known_keys(j, {"eps_loc", "eps_nl", "kernel", "conv_domain", "quad_points_per_sigma"}, "conv_config");
  ConvConfig c;
  c.eps_loc = get<double>(j, "eps_loc", "conv_config");
  c.eps_nl = get<double>(j, "eps_nl", "conv_config");
  c.kernel = kernel_from_json(j.at("kernel"));
  c.conv_domain = conv_domain_from_json(j.at("conv_domain"));
  c.quad_points_per_sigma = get<int>(j, "quad_points_per_sigma", "conv_config");
  return c;
}

json to_json(const TrefftzSet& ts) {
  json basis = {{"kind", basis_kind_name(ts.basis_kind)},
                {"n_max", ts.n_max},
                {"center", to_json(ts.basis_center)},
                {"ordering", "graded-lex"}};
  if (ts.basis_kind == BasisKind::Glued) {
    basis["local"] = "harmonic: 1, Re z^k, Im z^k (k = 1..n_max), x < 0";
    basis["nonlocal"] = "monomials x^i y^j, i + j <= n_max, x > 0";
  }
  json rows = json::array();
  for (Eigen::Index r = 0; r < ts.coeffs.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(ts.coeffs.cols()));
    for (Eigen::Index c = 0; c < ts.coeffs.cols(); ++c) row[static_cast<std::size_t>(c)] = ts.coeffs(r, c);
    rows.push_back(row);
  }
  return {{"format", "nltrefftz.trefftz_set"},
          {"version", 1},
          {"dim", ts.dim},
          {"basis", basis},
          {"cfg", to_json(ts.cfg)},
          {"eps_loc_local", ts.eps_loc_local},
          {"x0", to_json(ts.x0)},
          {"m", ts.m},
          {"p_max", ts.p_max},
          {"constraint_indexing", to_string(ts.indexing)},
          {"trefftz_domain", to_json(ts.trefftz_domain)},
          {"null_tol", ts.null_tol},
          {"n_funcs", ts.size()},
          {"n_basis", ts.basis_size()},
          {"coeffs", rows},
          {"residuals", ts.residuals},
          {"residual_scale", ts.residual_scale},
          {"constraints", ts.constraint_labels},
          {"dropped_constraints", ts.dropped_constraints}};
}

TrefftzSet trefftz_set_from_json(const json& j) {
  require_known_keys(j,
                     {"format", "version", "dim", "basis", "cfg", "eps_loc_local", "x0", "m", "p_max",
                      "constraint_indexing", "trefftz_domain", "null_tol", "n_funcs", "n_basis", "coeffs",
                      "residuals", "residual_scale", "constraints", "dropped_constraints"},
                     "trefftz_set");
  if (get<std::string>(j, "format", "trefftz_set") != "nltrefftz.trefftz_set")
    throw ConfigError("trefftz_set: unexpected format tag");
  TrefftzSet ts;
  ts.dim = get<int>(j, "dim", "trefftz_set");
  const json& basis = j.at("basis");
  const auto kind = get<std::string>(basis, "kind", "basis");
  if (kind != "monomial" && kind != "glued") throw ConfigError("basis: unknown kind '" + kind + "'");
  ts.basis_kind = kind == "monomial" ? BasisKind::Monomial : BasisKind::Glued;
  ts.n_max = get<int>(basis, "n_max", "basis");
  ts.basis_center = point_from_json(basis.at("center"));
  ts.cfg = conv_config_from_json(j.at("cfg"));
  ts.eps_loc_local = get<double>(j, "eps_loc_local", "trefftz_set");
  ts.x0 = point_from_json(j.at("x0"));
  ts.m = get<int>(j, "m", "trefftz_set");
  ts.p_max = get<int>(j, "p_max", "trefftz_set");
  ts.indexing = constraint_indexing_from_string(get<std::string>(j, "constraint_indexing", "trefftz_set"));
  ts.trefftz_domain = box_from_json(j.at("trefftz_domain"));
  ts.null_tol = get<double>(j, "null_tol", "trefftz_set");
  const auto n_funcs = get<Eigen::Index>(j, "n_funcs", "trefftz_set");
  const auto n_basis = get<Eigen::Index>(j, "n_basis", "trefftz_set");
  const auto rows = get<std::vector<std::vector<double>>>(j, "coeffs", "trefftz_set");
  if (static_cast<Eigen::Index>(rows.size()) != n_funcs) throw ConfigError("trefftz_set: row count mismatch");
  ts.coeffs.resize(n_funcs, n_basis);
  for (Eigen::Index r = 0; r < n_funcs; ++r) {
    if (static_cast<Eigen::Index>(rows[r].size()) != n_basis) throw ConfigError("trefftz_set: column count mismatch");
    for (Eigen::Index c = 0; c < n_basis; ++c) ts.coeffs(r, c) = rows[r][static_cast<std::size_t>(c)];
  }
  ts.residuals = get<std::vector<double>>(j, "residuals", "trefftz_set");
  ts.residual_scale = get<double>(j, "residual_scale", "trefftz_set");
  ts.constraint_labels = get<std::vector<std::string>>(j, "constraints", "trefftz_set");
  ts.dropped_constraints = get<std::vector<std::string>>(j, "dropped_constraints", "trefftz_set");
  return ts;
}

}  // namespace nltrefftz
