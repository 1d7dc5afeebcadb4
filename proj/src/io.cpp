#include "tbss/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace tbss::io {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) {
    const auto b = cur.find_first_not_of(" \t\r");
    const auto e = cur.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
  }
  return out;
}

bool parse_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && errno != ERANGE;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("json: missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

Eigen::MatrixXd read_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0, width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_fields(line);
    std::vector<double> vals(fields.size());
    bool numeric = true;
    for (std::size_t i = 0; i < fields.size() && numeric; ++i) numeric = parse_double(fields[i], vals[i]);
    if (!numeric) {
      if (rows.empty() && width == 0) {  // header
        width = fields.size();
        continue;
      }
      throw std::invalid_argument("csv: non-numeric value on line " + std::to_string(lineno));
    }
    if (width == 0) width = vals.size();
    if (vals.size() != width)
      throw std::invalid_argument("csv: line " + std::to_string(lineno) + " has " + std::to_string(vals.size()) +
                                  " fields, expected " + std::to_string(width));
    for (double v : vals)
      if (!std::isfinite(v)) throw std::invalid_argument("csv: non-finite value on line " + std::to_string(lineno));
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw std::invalid_argument("csv: no samples");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < width; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return m;
}

Eigen::MatrixXd read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  return read_csv(in);
}

void write_csv(std::ostream& out, const Eigen::MatrixXd& samples) {
  for (Eigen::Index c = 0; c < samples.cols(); ++c) out << (c ? "," : "") << "y" << c + 1;
  out << "\n";
  for (Eigen::Index r = 0; r < samples.rows(); ++r) {
    for (Eigen::Index c = 0; c < samples.cols(); ++c) out << (c ? "," : "") << fmt(samples(r, c));
    out << "\n";
  }
}

void write_csv_file(const std::string& path, const Eigen::MatrixXd& samples) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
  write_csv(out, samples);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("json: cannot parse '" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j, int indent) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
  out << j.dump(indent) << "\n";
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw std::invalid_argument("json: expected a list of rows");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j[0].size()));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != static_cast<std::size_t>(m.cols()))
      throw std::invalid_argument("json: ragged matrix");
    for (std::size_t c = 0; c < j[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
  }
  return m;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vector_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("json: expected a list of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

Json complex_to_json(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

Json tensor_to_json(const DenseTensor& t) {
  Json j;
  j["dims"] = t.dims();
  j["data"] = std::vector<double>(t.data().begin(), t.data().end());
  return j;
}

Json sym_tensor_to_json(const SymTensor& t) {
  Json j = tensor_to_json(t.expand());
  j["sym"] = true;
  j["dim"] = t.dim();
  j["order"] = t.order();
  j["packed"] = std::vector<double>(t.packed().begin(), t.packed().end());
  return j;
}

DenseTensor tensor_from_json(const Json& j) {
  if (j.is_object() && j.value("sym", false) && !j.contains("data")) return sym_tensor_from_json(j).expand();
  try {
    return DenseTensor(field(j, "dims").get<std::vector<std::size_t>>(), field(j, "data").get<std::vector<double>>());
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("json: bad tensor: ") + e.what());
  }
}

SymTensor sym_tensor_from_json(const Json& j) {
  try {
    if (j.is_object() && j.value("sym", false))
      return SymTensor(field(j, "dim").get<int>(), field(j, "order").get<int>(),
                       field(j, "packed").get<std::vector<double>>());
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("json: bad symmetric tensor: ") + e.what());
  }
  const DenseTensor t = tensor_from_json(j);
  const SymTensor s = symmetrize(t);
  if ((t - s.expand()).norm() > 1e-12 * std::max(1.0, t.norm()))
    throw std::invalid_argument("json: tensor is not symmetric");
  return s;
}

Json poly_to_json(const HomogPoly& p) {
  Json j;
  j["nvars"] = p.nvars();
  j["degree"] = p.degree();
  Json terms = Json::array();
  for (const auto& [mi, g] : p.coeffs()) terms.push_back({{"j", mi}, {"gamma", g}});
  j["terms"] = terms;
  return j;
}

HomogPoly poly_from_json(const Json& j) {
  try {
    HomogPoly p(field(j, "nvars").get<int>(), field(j, "degree").get<int>());
    for (const auto& t : field(j, "terms")) p.set_gamma(field(t, "j").get<MultiIndex>(), field(t, "gamma").get<double>());
    return p;
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("json: bad polynomial: ") + e.what());
  }
}

Json quantic_to_json(const BinaryQuantic& q) {
  Json j;
  j["degree"] = q.degree();
  j["gamma"] = vector_to_json(q.gamma);
  return j;
}

BinaryQuantic quantic_from_json(const Json& j) {
  if (j.is_object() && j.contains("nvars")) return BinaryQuantic::from_poly(poly_from_json(j));
  BinaryQuantic q;
  try {
    q.gamma = vector_from_json(field(j, "gamma"));
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("json: bad quantic: ") + e.what());
  }
  if (j.contains("degree") && j.at("degree").get<int>() != q.degree())
    throw std::invalid_argument("json: quantic degree does not match the gamma length");
  return q;
}

Json decomposition_to_json(const WaringDecomposition& w) {
  Json j;
  j["rank"] = w.rank;
  j["field"] = w.real ? "real" : "complex";
  j["residual"] = w.residual;
  j["kernel_dim"] = w.kernel_dim;
  Json terms = Json::array();
  for (const auto& t : w.terms)
    terms.push_back({{"lambda", complex_to_json(t.lambda)},
                     {"alpha", complex_to_json(t.alpha)},
                     {"beta", complex_to_json(t.beta)}});
  j["terms"] = terms;
  Json attempts = Json::array();
  for (const auto& a : w.attempts)
    attempts.push_back({{"omega", a.omega}, {"kernel_dim", a.kernel_dim}, {"outcome", a.outcome}});
  j["attempts"] = attempts;
  return j;
}

Json kruskal_to_json(const KruskalFactors& f) {
  Json j;
  j["rank"] = f.rank();
  j["lambda"] = vector_to_json(f.lambda.size() ? f.lambda : Eigen::VectorXd::Ones(f.rank()));
  j["A"] = matrix_to_json(f.A);
  j["B"] = matrix_to_json(f.B);
  j["C"] = matrix_to_json(f.C);
  return j;
}

KruskalFactors kruskal_from_json(const Json& j) {
  KruskalFactors f;
  f.A = matrix_from_json(field(j, "A"));
  f.B = matrix_from_json(field(j, "B"));
  f.C = matrix_from_json(field(j, "C"));
  if (j.contains("lambda")) f.lambda = vector_from_json(j.at("lambda"));
  return f;
}

}  // namespace tbss::io
