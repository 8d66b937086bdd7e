#pragma once

// JSON serialization for channels, covariance matrices, states, operators,
// Kraus families, and verification reports, plus the CLI run configuration.
// Complex entries are stored as [re, im] pairs, matrices row-major; doubles
// survive a round trip bit-for-bit.  Field names are fixed by the documents
// under schema/.

#include "verify.hpp"

#include <json.hpp>

#include <fstream>

namespace gkraus {

using json = nlohmann::json;

// ---- scalars and arrays ----------------------------------------------------

inline json json_complex(cx z) { return json::array({z.real(), z.imag()}); }

inline cx complex_from_json(const json& j)
{
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("complex entry must be [re, im]");
  return cx(j[0].get<double>(), j[1].get<double>());
}

inline json json_rmat(const RMat& m)
{
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline RMat rmat_from_json(const json& j)
{
  if (!j.is_array() || j.empty()) throw std::invalid_argument("real matrix must be a nested array");
  int rows = int(j.size()), cols = int(j[0].size());
  RMat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (int(j[i].size()) != cols) throw std::invalid_argument("ragged real matrix");
    for (int k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

inline json json_vec(const Vec& v)
{
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(json_complex(v[i]));
  return a;
}

inline Vec vec_from_json(const json& j)
{
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[Eigen::Index(i)] = complex_from_json(j[i]);
  return v;
}

inline json json_matrix(const Mat& m)
{
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(json_complex(m(i, k)));
    data.push_back(std::move(row));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline Mat matrix_from_json(const json& j)
{
  int rows = j.at("rows").get<int>(), cols = j.at("cols").get<int>();
  const json& data = j.at("data");
  if (int(data.size()) != rows) throw std::invalid_argument("matrix row count mismatch");
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (int(data[i].size()) != cols) throw std::invalid_argument("matrix column count mismatch");
    for (int k = 0; k < cols; ++k) m(i, k) = complex_from_json(data[i][k]);
  }
  return m;
}

// ---- channels and covariance matrices ---------------------------------------

inline json json_channel(const GaussianChannel& ch)
{
  json j{{"family", family_name(ch.family)}, {"alpha", ch.alpha}};
  if (family_uses_kappa(ch.family)) j["kappa"] = ch.kappa;
  return j;
}

// Matches raw (X, Y) against the canonical single-mode forms.  kappa = 1 with
// isotropic noise lands on B2.
inline GaussianChannel channel_from_xy(const RMat& X, const RMat& Y)
{
  auto near = [](double a, double b) { return std::abs(a - b) < 1e-12; };
  if (X.rows() != 2 || X.cols() != 2 || Y.rows() != 2 || Y.cols() != 2)
    throw std::invalid_argument("X and Y must be 2x2");
  if (!near(Y(0, 1), 0) || !near(Y(1, 0), 0) || !near(X(0, 1), 0) || !near(X(1, 0), 0))
    throw std::invalid_argument("X, Y do not match a canonical diagonal form");
  double a = Y(0, 0);
  bool iso_y = near(Y(1, 1), a);
  if (near(X(0, 0), 0) && near(X(1, 1), 0)) {
    if (!iso_y) throw std::invalid_argument("A1 requires isotropic Y");
    return make_channel(Family::A1, 0.0, a);
  }
  if (near(X(0, 0), 1) && near(X(1, 1), 0)) {
    if (!iso_y) throw std::invalid_argument("A2 requires isotropic Y");
    return make_channel(Family::A2, 0.0, a);
  }
  double k = X(0, 0);
  if (k > 0 && near(X(1, 1), k)) {
    if (near(k, 1.0)) {
      if (iso_y) return make_channel(Family::B2, 1.0, a);
      if (near(Y(1, 1), 0)) return make_channel(Family::B1, 1.0, a);
      throw std::invalid_argument("kappa = 1 requires Y = alpha*I or diag(alpha, 0)");
    }
    if (!iso_y) throw std::invalid_argument("C1/C2 require isotropic Y");
    return make_channel(k < 1 ? Family::C1 : Family::C2, k, a);
  }
  if (k > 0 && near(X(1, 1), -k)) {
    if (!iso_y) throw std::invalid_argument("D requires isotropic Y");
    return make_channel(Family::D, k, a);
  }
  throw std::invalid_argument("X, Y do not match a canonical single-mode form");
}

inline GaussianChannel channel_from_json(const json& j)
{
  if (j.contains("X") || j.contains("Y"))
    return channel_from_xy(rmat_from_json(j.at("X")), rmat_from_json(j.at("Y")));
  auto fam = family_from_name(j.at("family").get<std::string>());
  if (!fam) throw std::invalid_argument("unknown family: " + j.at("family").get<std::string>());
  double kappa = family_uses_kappa(*fam) ? j.at("kappa").get<double>() : 0.0;
  return make_channel(*fam, kappa, j.value("alpha", 0.0));
}

inline json json_covmat(const CovMat& v)
{
  json mean = json::array();
  for (Eigen::Index i = 0; i < v.mean.size(); ++i) mean.push_back(v.mean[i]);
  return json{{"m", json_rmat(v.m)}, {"mean", std::move(mean)}};
}

inline CovMat covmat_from_json(const json& j)
{
  CovMat v;
  v.m = rmat_from_json(j.at("m"));
  const json& mean = j.at("mean");
  v.mean = RVec(mean.size());
  for (size_t i = 0; i < mean.size(); ++i) v.mean[Eigen::Index(i)] = mean[i].get<double>();
  return v;
}

// ---- states and density operators -------------------------------------------

inline json json_state(const FockState& s)
{
  return json{{"dim", s.dim()}, {"amps", json_vec(s.amps)}, {"leakage", s.leakage}};
}

inline FockState state_from_json(const json& j)
{
  FockState s;
  s.amps = vec_from_json(j.at("amps"));
  if (j.contains("dim") && j.at("dim").get<int>() != s.dim())
    throw std::invalid_argument("state dim does not match amplitude count");
  s.leakage = j.value("leakage", 0.0);
  s.leak_warn = s.leakage > 1e-8;
  return s;
}

inline json json_density(const Mat& rho, double leakage = 0.0)
{
  json j = json_matrix(rho);
  j["dim"] = rho.rows();
  j["leakage"] = leakage;
  return j;
}

inline Mat density_from_json(const json& j) { return matrix_from_json(j); }

// ---- Kraus families ----------------------------------------------------------

inline json json_family(const KrausFamily& f)
{
  json params{{"alpha", f.alpha}};
  if (family_uses_kappa(f.family)) params["kappa"] = f.kappa;
  if (f.finite_r())
    params["r"] = f.r;
  else
    params["r"] = "limit";

  json j{{"family", family_name(f.family)},
         {"rep", rep_name(f.rep)},
         {"params", std::move(params)},
         {"dim", f.dim},
         {"index_kind", index_kind_name(f.kind)}};

  json cutoffs = json::object();
  if (f.n_max >= 0) cutoffs["n_max"] = f.n_max;
  if (f.n1_max >= 0) cutoffs["n1_max"] = f.n1_max;
  if (f.n2_max >= 0) cutoffs["n2_max"] = f.n2_max;
  if (!cutoffs.empty()) j["cutoffs"] = std::move(cutoffs);

  if (f.kind == IndexKind::quadrature_2d)
    j["grid"] = json{{"beta_max", f.grid2.beta_max}, {"step", f.grid2.step}};
  else if (f.kind == IndexKind::quadrature_1d)
    j["grid"] = json{{"x_max", f.grid1.x_max}, {"step", f.grid1.step}};

  json ops = json::array();
  for (const auto& t : f.ops) {
    json o = json::object();
    if (f.kind == IndexKind::single)
      o["index"] = json::array({t.n1});
    else if (f.kind == IndexKind::double_index)
      o["index"] = json::array({t.n1, t.n2});
    else {
      o["point"] = json_complex(t.point);
      o["weight"] = t.weight;
    }
    if (t.factored) {
      o["ket"] = json_vec(t.ket);
      o["bra"] = json_vec(t.bra);
    } else {
      o["matrix"] = json_matrix(t.m);
    }
    ops.push_back(std::move(o));
  }
  j["operators"] = std::move(ops);
  return j;
}

inline KrausFamily family_from_json(const json& j)
{
  KrausFamily f;
  auto fam = family_from_name(j.at("family").get<std::string>());
  if (!fam) throw std::invalid_argument("unknown family: " + j.at("family").get<std::string>());
  f.family = *fam;
  auto rep = rep_from_name(j.at("rep").get<std::string>());
  if (!rep) throw std::invalid_argument("unknown representation: " + j.at("rep").get<std::string>());
  f.rep = *rep;

  const json& params = j.at("params");
  f.kappa = params.value("kappa", 0.0);
  f.alpha = params.value("alpha", 0.0);
  if (params.contains("r") && params.at("r").is_number())
    f.r = params.at("r").get<double>();
  else
    f.r = std::numeric_limits<double>::quiet_NaN();

  f.dim = j.at("dim").get<int>();
  std::string kind = j.at("index_kind").get<std::string>();
  if (kind == "single")
    f.kind = IndexKind::single;
  else if (kind == "double")
    f.kind = IndexKind::double_index;
  else if (kind == "quadrature_1d")
    f.kind = IndexKind::quadrature_1d;
  else if (kind == "quadrature_2d")
    f.kind = IndexKind::quadrature_2d;
  else
    throw std::invalid_argument("unknown index kind: " + kind);

  if (j.contains("cutoffs")) {
    const json& c = j.at("cutoffs");
    f.n_max = c.value("n_max", -1);
    f.n1_max = c.value("n1_max", -1);
    f.n2_max = c.value("n2_max", -1);
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    if (f.kind == IndexKind::quadrature_2d) {
      f.grid2.beta_max = g.at("beta_max").get<double>();
      f.grid2.step = g.at("step").get<double>();
    } else {
      f.grid1.x_max = g.at("x_max").get<double>();
      f.grid1.step = g.at("step").get<double>();
    }
  }

  for (const json& o : j.at("operators")) {
    KrausTerm t;
    if (o.contains("index")) {
      const json& idx = o.at("index");
      t.n1 = idx.at(0).get<int>();
      if (idx.size() > 1) t.n2 = idx.at(1).get<int>();
    }
    if (o.contains("point")) t.point = complex_from_json(o.at("point"));
    t.weight = o.value("weight", 1.0);
    if (o.contains("ket")) {
      t.ket = vec_from_json(o.at("ket"));
      t.bra = vec_from_json(o.at("bra"));
      t.factored = true;
    } else {
      t.m = matrix_from_json(o.at("matrix"));
    }
    f.ops.push_back(std::move(t));
  }
  return f;
}

// ---- verification reports -----------------------------------------------------

inline json json_report(const VerificationReport& r)
{
  return json{{"check", r.check},   {"params", r.params}, {"metric", r.metric},
              {"value", r.value},   {"tolerance", r.tolerance}, {"pass", r.pass},
              {"leakage", r.leakage}, {"note", r.note}};
}

inline VerificationReport report_from_json(const json& j)
{
  VerificationReport r;
  r.check = j.at("check").get<std::string>();
  r.params = j.at("params").get<std::string>();
  r.metric = j.at("metric").get<std::string>();
  r.value = j.at("value").get<double>();
  r.tolerance = j.at("tolerance").get<double>();
  r.pass = j.at("pass").get<bool>();
  r.leakage = j.value("leakage", 0.0);
  r.note = j.value("note", std::string{});
  return r;
}

namespace detail {

inline std::string csv_quote(const std::string& s)
{
  std::string out = "\"";
  for (char c : s) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

}  // namespace detail

inline std::string report_csv_header() { return "check,params,metric,value,tolerance,pass,leakage,note"; }

inline std::string report_csv_row(const VerificationReport& r)
{
  std::ostringstream os;
  os.precision(17);
  os << detail::csv_quote(r.check) << ',' << detail::csv_quote(r.params) << ','
     << detail::csv_quote(r.metric) << ',' << r.value << ',' << r.tolerance << ','
     << (r.pass ? "true" : "false") << ',' << r.leakage << ',' << detail::csv_quote(r.note);
  return os.str();
}

// ---- run configuration ----------------------------------------------------------

struct RunConfig {
  int N = 60;
  int n_max = -1;        // single-index cutoff (-1: defaults to N)
  int n1_max = -1;       // double-index cutoffs (-1: family defaults)
  int n2_max = -1;
  Grid1D grid1{};
  Grid2D grid2{};
  std::vector<double> r_list{1, 2, 4, 8};
  std::string out_path;
  std::string format = "json";  // json | csv

  void validate() const
  {
    if (N < 2) throw std::invalid_argument("truncation N must be at least 2");
    if (n_max == 0 || n1_max == 0 || n2_max == 0)
      throw std::invalid_argument("index cutoffs must be at least 1");
    if (grid1.step <= 0 || grid2.step <= 0 || grid1.x_max <= 0 || grid2.beta_max <= 0)
      throw std::invalid_argument("grid extents and steps must be positive");
    if (format != "json" && format != "csv")
      throw std::invalid_argument("format must be json or csv");
    for (double r : r_list)
      if (!(r >= 0)) throw std::invalid_argument("r values must be nonnegative");
  }
};

inline RunConfig runconfig_from_json(const json& j)
{
  RunConfig c;
  c.N = j.value("N", c.N);
  c.n_max = j.value("n_max", c.n_max);
  c.n1_max = j.value("n1_max", c.n1_max);
  c.n2_max = j.value("n2_max", c.n2_max);
  if (j.contains("grid_2d")) {
    c.grid2.beta_max = j.at("grid_2d").value("beta_max", c.grid2.beta_max);
    c.grid2.step = j.at("grid_2d").value("step", c.grid2.step);
  }
  if (j.contains("grid_1d")) {
    c.grid1.x_max = j.at("grid_1d").value("x_max", c.grid1.x_max);
    c.grid1.step = j.at("grid_1d").value("step", c.grid1.step);
  }
  if (j.contains("r_list")) c.r_list = j.at("r_list").get<std::vector<double>>();
  c.out_path = j.value("out", c.out_path);
  c.format = j.value("format", c.format);
  c.validate();
  return c;
}

inline json json_runconfig(const RunConfig& c)
{
  return json{{"N", c.N},
              {"n_max", c.n_max},
              {"n1_max", c.n1_max},
              {"n2_max", c.n2_max},
              {"grid_2d", {{"beta_max", c.grid2.beta_max}, {"step", c.grid2.step}}},
              {"grid_1d", {{"x_max", c.grid1.x_max}, {"step", c.grid1.step}}},
              {"r_list", c.r_list},
              {"format", c.format}};
}

// ---- file helpers -----------------------------------------------------------------

inline json load_json(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

inline void save_json(const std::string& path, const json& j, int indent = -1)
{
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(indent) << '\n';
}

}  // namespace gkraus
