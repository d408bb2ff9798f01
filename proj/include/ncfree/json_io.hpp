#pragma once

// JSON wire formats: matrices as row-major [re,im] pair arrays, points as
// lists of square matrices, series as explicit term lists with an optional
// pattern tag, and check reports for machine consumption.

#include "ncfree/check_report.hpp"
#include "ncfree/fock_sim.hpp"
#include "ncfree/free_series.hpp"
#include "ncfree/nc_core.hpp"

#include <json.hpp>

namespace ncfree {

using Json = nlohmann::json;

inline Json complex_to_json(const Complex& c) {
  return Json::array({c.real(), c.imag()});
}

inline Complex complex_from_json(const Json& j) {
  require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(),
          "JSON: complex entries must be [re, im]");
  Complex c(j[0].get<double>(), j[1].get<double>());
  require(std::isfinite(c.real()) && std::isfinite(c.imag()),
          "JSON: non-finite entry");
  return c;
}

inline Json matrix_to_json(const Matrix& m) {
  Json entries = Json::array();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c)
      entries.push_back(complex_to_json(m(r, c)));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

inline Matrix matrix_from_json(const Json& j) {
  require(j.contains("rows") && j.contains("cols") && j.contains("entries"),
          "JSON matrix: need rows, cols, entries");
  const Index rows = j.at("rows").get<Index>();
  const Index cols = j.at("cols").get<Index>();
  require(rows >= 0 && cols >= 0, "JSON matrix: negative shape");
  const Json& entries = j.at("entries");
  require(entries.is_array() &&
              static_cast<Index>(entries.size()) == rows * cols,
          "JSON matrix: entries length must be rows*cols");
  Matrix m(rows, cols);
  Index k = 0;
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(entries[k++]);
  return m;
}

inline Json point_to_json(const Point& z) {
  Json mats = Json::array();
  for (int i = 0; i < z.d(); ++i) {
    Json mat = Json::array();
    for (Index r = 0; r < z.rows(); ++r) {
      Json row = Json::array();
      for (Index c = 0; c < z.cols(); ++c)
        row.push_back(complex_to_json(z[i](r, c)));
      mat.push_back(row);
    }
    mats.push_back(mat);
  }
  return Json{{"d", z.d()}, {"n", z.rows()}, {"mats", mats}};
}

inline Point point_from_json(const Json& j) {
  require(j.contains("d") && j.contains("n") && j.contains("mats"),
          "JSON point: need d, n, mats");
  const int d = j.at("d").get<int>();
  const Index n = j.at("n").get<Index>();
  const Json& mats = j.at("mats");
  require(d >= 1 && mats.is_array() && static_cast<int>(mats.size()) == d,
          "JSON point: mats must list d matrices");
  std::vector<Matrix> ms;
  ms.reserve(d);
  for (const Json& mat : mats) {
    require(mat.is_array() && static_cast<Index>(mat.size()) == n,
            "JSON point: each matrix must have n rows");
    Matrix m(n, n);
    for (Index r = 0; r < n; ++r) {
      const Json& row = mat[r];
      require(row.is_array() && static_cast<Index>(row.size()) == n,
              "JSON point: each row must have n entries");
      for (Index c = 0; c < n; ++c) m(r, c) = complex_from_json(row[c]);
    }
    ms.push_back(std::move(m));
  }
  return Point(d, std::move(ms));
}

inline Json series_to_json(const FreeSeries& s) {
  Json terms = Json::array();
  for (const auto& [w, c] : s.coeffs()) {
    Json word = Json::array();
    for (int l : w.letters) word.push_back(l);
    terms.push_back(
        Json{{"word", word}, {"re", c.real()}, {"im", c.imag()}});
  }
  Json gen;
  if (s.generator()) {
    switch (s.generator()->kind) {
      case GeneratorKind::Geometric:
        gen = Json{{"kind", "geometric"}, {"params", Json::object()}};
        break;
      case GeneratorKind::Full:
        gen = Json{{"kind", "full"}, {"params", Json::object()}};
        break;
      case GeneratorKind::Luminet:
        gen = Json{{"kind", "luminet"},
                   {"params", Json{{"k_max", s.generator()->param}}}};
        break;
    }
  }
  return Json{{"d", s.d()}, {"terms", terms}, {"generator", gen}};
}

inline FreeSeries series_from_json(const Json& j) {
  require(j.contains("d") && j.contains("terms"),
          "JSON series: need d and terms");
  const int d = j.at("d").get<int>();
  if (j.contains("generator") && !j.at("generator").is_null()) {
    const Json& gen = j.at("generator");
    const std::string kind = gen.at("kind").get<std::string>();
    if (kind == "geometric") {
      require(d == 1, "JSON series: geometric pattern requires d = 1");
      return FreeSeries::geometric();
    }
    if (kind == "full") return FreeSeries::full(d);
    if (kind == "luminet") {
      require(d == 2, "JSON series: luminet pattern requires d = 2");
      return FreeSeries::luminet(gen.at("params").at("k_max").get<int>());
    }
    throw std::invalid_argument("JSON series: unknown generator kind");
  }
  FreeSeries s(d);
  for (const Json& t : j.at("terms")) {
    require(t.contains("word") && t.contains("re") && t.contains("im"),
            "JSON series: each term needs word, re, im");
    std::vector<int> letters;
    for (const Json& l : t.at("word")) letters.push_back(l.get<int>());
    Complex c(t.at("re").get<double>(), t.at("im").get<double>());
    require(std::isfinite(c.real()) && std::isfinite(c.imag()),
            "JSON series: non-finite coefficient");
    s.add(Word(std::move(letters)), c);
  }
  return s;
}

inline Json fock_operator_to_json(const FockOperator& f) {
  return Json{{"basis", Json{{"d", f.basis.d()}, {"N", f.basis.N()}}},
              {"mat", matrix_to_json(f.mat)}};
}

inline FockOperator fock_operator_from_json(const Json& j) {
  require(j.contains("basis") && j.contains("mat"),
          "JSON fock operator: need basis and mat");
  FockBasis basis(j.at("basis").at("d").get<int>(),
                  j.at("basis").at("N").get<int>());
  return FockOperator(basis, matrix_from_json(j.at("mat")));
}

inline Json central_vector_to_json(const std::vector<Complex>& gamma) {
  Json g = Json::array();
  for (const Complex& c : gamma) g.push_back(complex_to_json(c));
  return Json{{"d", gamma.size()}, {"gamma", g}};
}

inline std::vector<Complex> central_vector_from_json(const Json& j) {
  require(j.contains("gamma"), "JSON central vector: need gamma");
  std::vector<Complex> g;
  for (const Json& c : j.at("gamma")) g.push_back(complex_from_json(c));
  if (j.contains("d"))
    require(j.at("d").get<int>() == static_cast<int>(g.size()),
            "JSON central vector: d does not match gamma length");
  return g;
}

inline Json check_report_to_json(const CheckReport& r) {
  Json cases = Json::array();
  for (const auto& c : r.cases)
    cases.push_back(Json{{"case", c.description}, {"value", c.residual}});
  return Json{{"name", r.name},
              {"pass", r.pass()},
              {"residuals", cases},
              {"tolerance", r.tolerance}};
}

}  // namespace ncfree
