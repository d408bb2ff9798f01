#pragma once

// The ball automorphism attached to a central vector gamma with |gamma| < 1:
// closed form, geometric series expansion, and the d x d matrix carrying its
// first-order term.  All square roots use the rank-one closed form, exact
// for the |gamma><gamma| structure.

#include "ncfree/check_report.hpp"
#include "ncfree/nc_core.hpp"
#include "ncfree/taylor_calc.hpp"

namespace ncfree {

struct CentralVector {
  std::vector<Complex> gamma;

  explicit CentralVector(std::vector<Complex> g) : gamma(std::move(g)) {
    require(!gamma.empty(), "CentralVector: need d >= 1");
    require(norm() < 1.0, "CentralVector: |gamma| must be < 1");
  }

  int d() const { return static_cast<int>(gamma.size()); }
  double norm2() const {
    double s = 0.0;
    for (const Complex& c : gamma) s += std::norm(c);
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }
};

namespace detail {

// (I_d - gamma gamma^*)^{alpha} = I + ((1-|gamma|^2)^{alpha} - 1) P with P
// the projection onto span(gamma).
inline Matrix gamma_defect_power(const CentralVector& g, double alpha) {
  const int d = g.d();
  Matrix out = Matrix::Identity(d, d);
  const double g2 = g.norm2();
  if (g2 == 0.0) return out;
  const double factor = std::pow(1.0 - g2, alpha) - 1.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      out(i, j) += factor * g.gamma[i] * std::conj(g.gamma[j]) / g2;
  return out;
}

inline Matrix z_dot_gamma(const CentralVector& g, const Point& z) {
  Matrix acc = Matrix::Zero(z.rows(), z.rows());
  for (int i = 0; i < g.d(); ++i) acc += g.gamma[i] * z[i];
  return acc;
}

// Components of z composed with (X (x) I_n) for a d x d matrix X.
inline Point z_compose(const Point& z, const Matrix& x) {
  std::vector<Matrix> ms;
  ms.reserve(z.d());
  for (int c = 0; c < z.d(); ++c) {
    Matrix acc = Matrix::Zero(z.rows(), z.cols());
    for (int i = 0; i < z.d(); ++i) acc += z[i] * x(i, c);
    ms.push_back(std::move(acc));
  }
  return Point(z.d(), std::move(ms));
}

}  // namespace detail

// The positive square root (I_d - gamma gamma^*)^{1/2}.
inline Matrix gamma_defect_sqrt(const CentralVector& g) {
  return detail::gamma_defect_power(g, 0.5);
}

// Closed form: sqrt(1-|g|^2) (I - z.gamma)^{-1} applied to the row of
// components conj(g_i) I - Z_i, composed with the inverse defect root.
inline Point g_gamma(const CentralVector& g, const Point& z) {
  require(z.d() == g.d(), "g_gamma: alphabet mismatch");
  require(z.square(), "g_gamma: point must be square");
  const Index n = z.level();
  Matrix resolvent = Matrix::Identity(n, n) - detail::z_dot_gamma(g, z);
  Eigen::FullPivLU<Matrix> lu(resolvent);
  require(lu.isInvertible(), "g_gamma: I - z.gamma is singular");
  Matrix a = std::sqrt(1.0 - g.norm2()) * lu.inverse();

  std::vector<Matrix> row;
  row.reserve(g.d());
  for (int i = 0; i < g.d(); ++i)
    row.push_back(std::conj(g.gamma[i]) * Matrix::Identity(n, n) - z[i]);
  Point b(g.d(), std::move(row));
  Point composed = detail::z_compose(b, detail::gamma_defect_power(g, -0.5));

  std::vector<Matrix> ms;
  ms.reserve(g.d());
  for (int c = 0; c < g.d(); ++c) ms.push_back(a * composed[c]);
  return Point(g.d(), std::move(ms));
}

inline MatricialMap mobius_map(const CentralVector& g) {
  return MatricialMap{g.d(), 1.0,
                      [g](const Point& z) { return g_gamma(g, z); }};
}

struct SeriesImage {
  Point value;
  double tail_bound = 0.0;
};

// Partial sum of the expansion: the constant term gamma^* followed by the
// degree-k terms -sqrt(1-|g|^2) (z.gamma)^{k-1} (z o (X (x) I)) for k >= 1,
// X the defect root.  (Expanding the resolvent in the closed form produces
// (z.gamma)^k gamma^* - (z.gamma)^{k-1} z = -(z.gamma)^{k-1} z (I - gamma
// gamma^*), which folds one defect factor and flips the sign.)  The tail
// bound sums the term-norm estimates sqrt(1-|g|^2) ||X|| rho (rho |g|)^{k-1}.
inline SeriesImage g_series_partial(const CentralVector& g, const Point& z,
                                    int k_max) {
  require(z.d() == g.d(), "g_series_partial: alphabet mismatch");
  require(z.square(), "g_series_partial: point must be square");
  const Index n = z.level();
  const double rho = row_norm(z);
  require(rho * g.norm() < 1.0, "g_series_partial: rho |gamma| must be < 1");

  std::vector<Matrix> ms;
  ms.reserve(g.d());
  for (int c = 0; c < g.d(); ++c)
    ms.push_back(std::conj(g.gamma[c]) * Matrix::Identity(n, n));
  Point acc(g.d(), std::move(ms));

  const Matrix x = gamma_defect_sqrt(g);
  const Point zx = detail::z_compose(z, x);
  const Matrix zg = detail::z_dot_gamma(g, z);
  const double dg = std::sqrt(1.0 - g.norm2());

  Matrix power = Matrix::Identity(n, n);  // (z.gamma)^{k-1}
  for (int k = 1; k <= k_max; ++k) {
    std::vector<Matrix> term;
    term.reserve(g.d());
    for (int c = 0; c < g.d(); ++c) term.push_back(-dg * (power * zx[c]));
    acc = acc + Point(g.d(), std::move(term));
    power = power * zg;
  }

  const double base = rho * g.norm();
  const double tail = dg * spectral_norm(x) * rho * std::pow(base, k_max) /
                      (1.0 - base);
  return SeriesImage{std::move(acc), tail};
}

// The d x d matrix sqrt(1-|gamma|^2) (I_d - gamma gamma^*)^{1/2}.  The
// first-order term of the map is z |-> -(z o (dg (x) I_n)): the resolvent
// expansion above carries the minus sign.
inline Matrix dg_gamma_matrix(const CentralVector& g) {
  return std::sqrt(1.0 - g.norm2()) * gamma_defect_sqrt(g);
}

// Degree-2 agreement between the series expansion and the block-extracted
// second difference of the closed form, on random directions.
inline CheckReport second_order_check(const CentralVector& g, int trials,
                                      double tol = 1e-8, unsigned seed = 0) {
  Rng rng(seed);
  CheckReport report{"mobius_second_order", tol, {}};
  MatricialMap map = mobius_map(g);
  const Matrix x = gamma_defect_sqrt(g);
  const double dg = std::sqrt(1.0 - g.norm2());
  std::uniform_int_distribution<int> lvl(1, 2);

  for (int t = 0; t < trials; ++t) {
    const Index n = lvl(rng);
    Point u = random_point_with_norm(rng, g.d(), n, 0.2);

    // Route A: homogeneous degree-2 series term at z = u.
    Point ux = detail::z_compose(u, x);
    Matrix ug = detail::z_dot_gamma(g, u);
    std::vector<Matrix> series_term;
    series_term.reserve(g.d());
    for (int c = 0; c < g.d(); ++c) series_term.push_back(-dg * (ug * ux[c]));

    // Route B: second difference of the closed form, componentwise.
    double res = 0.0;
    std::vector<Point> zs(3, Point::zero(g.d(), n));
    std::vector<Point> us(2, u);
    for (int c = 0; c < g.d(); ++c) {
      Matrix corner = delta_n(map.component(c), zs, us).value;
      res = std::max(res, spectral_norm(corner - series_term[c]));
    }
    report.add("trial " + std::to_string(t) + " (level " + std::to_string(n) +
                   ")",
               res);
  }
  return report;
}

}  // namespace ncfree
