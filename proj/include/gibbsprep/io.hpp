#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gibbsprep/ansatz.hpp"
#include "gibbsprep/circuits.hpp"
#include "gibbsprep/fourierlog.hpp"
#include "gibbsprep/hamiltonians.hpp"
#include "gibbsprep/numkernel.hpp"

namespace gibbsprep {

using nlohmann::json;

inline void to_json(json& j, const ErrorCertificate& c) {
  j = json{{"grid_size", c.grid_size},
           {"max_error", c.max_error},
           {"target_eps", c.target_eps},
           {"passed", c.passed}};
}

inline void from_json(const json& j, ErrorCertificate& c) {
  j.at("grid_size").get_to(c.grid_size);
  j.at("max_error").get_to(c.max_error);
  j.at("target_eps").get_to(c.target_eps);
  j.at("passed").get_to(c.passed);
}

/// Series document: {p_min, eps, M, constant, b1[], b2[], t[]}.
inline void to_json(json& j, const LogSeries& s) {
  j = json{{"p_min", s.p_min},     {"eps", s.eps}, {"M", s.series.M},
           {"constant", s.series.constant}, {"b1", s.series.b1}, {"b2", s.series.b2},
           {"t", s.series.t}};
}

inline void from_json(const json& j, LogSeries& s) {
  j.at("p_min").get_to(s.p_min);
  j.at("eps").get_to(s.eps);
  j.at("M").get_to(s.series.M);
  j.at("constant").get_to(s.series.constant);
  j.at("b1").get_to(s.series.b1);
  j.at("b2").get_to(s.series.b2);
  j.at("t").get_to(s.series.t);
  if (static_cast<int>(s.series.b1.size()) != s.series.M ||
      static_cast<int>(s.series.b2.size()) != s.series.M ||
      static_cast<int>(s.series.t.size()) != s.series.M) {
    throw std::invalid_argument("LogSeries: coefficient arrays must have length M");
  }
  s.certificate = ErrorCertificate{};
}

inline void to_json(json& j, const PauliSum& h) {
  json terms = json::array();
  for (const auto& t : h.terms()) {
    terms.push_back(json{{"coeff", t.coeff}, {"letters", t.string.str()}});
  }
  j = json{{"n", h.n()}, {"terms", terms}};
}

inline PauliSum pauli_sum_from_json(const json& j) {
  int n = j.at("n").get<int>();
  std::vector<PauliTerm> terms;
  for (const json& t : j.at("terms")) {
    terms.push_back({t.at("coeff").get<double>(),
                     PauliString::parse(t.at("letters").get<std::string>())});
  }
  return PauliSum(n, terms);
}

inline void to_json(json& j, const QueryCostReport& r) {
  j = json{{"oracle_name", r.oracle_name},
           {"eps", r.eps},
           {"query_count", r.query_count},
           {"formula_terms", r.formula_terms}};
}

inline void to_json(json& j, const AnsatzParameters& p) {
  std::vector<double> phi(p.phi.data(), p.phi.data() + p.phi.size());
  std::vector<double> probs(p.probs.data(), p.probs.data() + p.probs.size());
  j = json{{"phi", phi}, {"probs", probs}};
}

inline void from_json(const json& j, AnsatzParameters& p) {
  std::vector<double> phi = j.at("phi").get<std::vector<double>>();
  std::vector<double> probs = j.at("probs").get<std::vector<double>>();
  p.phi = Eigen::Map<const RealVector>(phi.data(), static_cast<Index>(phi.size()));
  p.probs = Eigen::Map<const RealVector>(probs.data(), static_cast<Index>(probs.size()));
}

/// Density matrix document: {dim, re: [[...]], im: [[...]]} row-major.
inline json density_matrix_to_json(const DensityMatrix& rho) {
  Index d = rho.dim();
  json re = json::array(), im = json::array();
  for (Index i = 0; i < d; ++i) {
    json rrow = json::array(), irow = json::array();
    for (Index k = 0; k < d; ++k) {
      rrow.push_back(rho.matrix()(i, k).real());
      irow.push_back(rho.matrix()(i, k).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  return json{{"dim", d}, {"re", re}, {"im", im}};
}

inline DensityMatrix density_matrix_from_json(const json& j) {
  Index d = j.at("dim").get<Index>();
  ComplexMatrix m(d, d);
  const json& re = j.at("re");
  const json& im = j.at("im");
  if (static_cast<Index>(re.size()) != d || static_cast<Index>(im.size()) != d) {
    throw std::invalid_argument("density matrix document: row count mismatch");
  }
  for (Index i = 0; i < d; ++i) {
    for (Index k = 0; k < d; ++k) {
      m(i, k) = Complex(re[i][k].get<double>(), im[i][k].get<double>());
    }
  }
  return DensityMatrix(m);
}

/// Write-temp-then-rename so readers never observe a partial file.
inline void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("atomic_write_file: cannot open " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("atomic_write_file: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("read_file: cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace gibbsprep
