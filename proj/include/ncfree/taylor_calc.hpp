#pragma once

// Block-matrix difference calculus for matricial families: first and higher
// order difference operators extracted from upper-triangular block
// evaluations, coefficient recovery from black boxes, the remainder-form
// Taylor expansion, and sampling checks for the multilinear structure.

#include "ncfree/check_report.hpp"
#include "ncfree/free_series.hpp"
#include "ncfree/nc_core.hpp"

#include <functional>

namespace ncfree {

// A level-indexed family queried through a single evaluator that accepts a
// square tuple at any level and returns a square matrix of the same level.
// The matricial (intertwiner-respecting) property is tested by the harness,
// never assumed.  Evaluators must be reentrant: delta operators call them at
// several assembled levels per invocation.
struct MatricialFunction {
  int d = 1;
  double domain_radius = std::numeric_limits<double>::infinity();
  std::function<Matrix(const Point&)> evaluator;

  Matrix operator()(const Point& z) const {
    require(z.d() == d, "MatricialFunction: alphabet mismatch");
    require(z.square(), "MatricialFunction: point must be square");
    if (row_norm(z) >= domain_radius)
      throw std::domain_error("MatricialFunction: point outside declared domain");
    return evaluator(z);
  }
};

// Same contract with tuple values (used for ball self-maps).
struct MatricialMap {
  int d = 1;
  double domain_radius = std::numeric_limits<double>::infinity();
  std::function<Point(const Point&)> evaluator;

  Point operator()(const Point& z) const {
    require(z.d() == d, "MatricialMap: alphabet mismatch");
    require(z.square(), "MatricialMap: point must be square");
    if (row_norm(z) >= domain_radius)
      throw std::domain_error("MatricialMap: point outside declared domain");
    return evaluator(z);
  }

  MatricialFunction component(int c) const {
    require(c >= 0 && c < d, "MatricialMap: component out of range");
    auto ev = evaluator;
    return MatricialFunction{
        d, domain_radius,
        [ev, c](const Point& z) { return ev(z)[c]; }};
  }
};

// Partial sums to a fixed degree keep the family exactly matricial at every
// level, so one uniform truncation is used rather than a per-point choice.
inline MatricialFunction series_function(const FreeSeries& s,
                                         int eval_degree_cap = 600) {
  const int k_max =
      s.finitely_supported() ||
              (s.generator() && s.generator()->kind == GeneratorKind::Luminet)
          ? s.max_degree()
          : eval_degree_cap;
  s.ensure_degree(k_max);
  const double R = radius(s, std::max(1, k_max)).value;
  FreeSeries copy = s;
  return MatricialFunction{
      s.d(), R,
      [copy, k_max](const Point& z) { return eval(copy, z, k_max).value; }};
}

struct DifferenceResult {
  Matrix value;                 // extracted top-right corner
  std::vector<std::vector<Matrix>> full_grid;
  double structure_residual = 0.0;
  double tolerance = kDefaultTol;

  bool matricial_ok() const { return structure_residual <= tolerance; }
};

// First-order difference: evaluate at [[z,u],[0,w]] and take the (1,2)
// block.  The residual records every deviation from the predicted block
// structure; violations are reported, not thrown.
inline DifferenceResult delta1(const MatricialFunction& f, const Point& z,
                               const Point& w, const Point& u,
                               double tol = kDefaultTol) {
  Point p = upper_block(z, w, u);
  Matrix big = f(p);
  std::vector<Index> sizes{z.rows(), w.rows()};
  Matrix f11 = block_of(big, sizes, 0, 0);
  Matrix f12 = block_of(big, sizes, 0, 1);
  Matrix f21 = block_of(big, sizes, 1, 0);
  Matrix f22 = block_of(big, sizes, 1, 1);
  double res = spectral_norm(f21);
  res = std::max(res, spectral_norm(f11 - f(z)));
  res = std::max(res, spectral_norm(f22 - f(w)));
  DifferenceResult out;
  out.value = std::move(f12);
  out.full_grid = {{std::move(f11), Matrix(out.value)},
                   {std::move(f21), std::move(f22)}};
  out.structure_residual = res;
  out.tolerance = tol;
  return out;
}

// n-th order difference: the (0,n) block of the image of the bidiagonal
// point.  With check_grid set, every interior block is compared against the
// independently assembled lower-order difference of its sub-chain.
inline DifferenceResult delta_n(const MatricialFunction& f,
                                const std::vector<Point>& zs,
                                const std::vector<Point>& us,
                                double tol = kDefaultTol,
                                bool check_grid = false) {
  Point p = bidiagonal_block(zs, us);
  Matrix big = f(p);
  const size_t m = zs.size();
  std::vector<Index> sizes;
  sizes.reserve(m);
  for (const auto& z : zs) sizes.push_back(z.rows());

  DifferenceResult out;
  out.tolerance = tol;
  out.full_grid.assign(m, std::vector<Matrix>(m));
  double res = 0.0;
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) {
      out.full_grid[i][j] = block_of(big, sizes, i, j);
      if (i > j) res = std::max(res, spectral_norm(out.full_grid[i][j]));
    }
  for (size_t i = 0; i < m; ++i)
    res = std::max(res, spectral_norm(out.full_grid[i][i] - f(zs[i])));

  if (check_grid && m > 2) {
    for (size_t i = 0; i < m; ++i)
      for (size_t j = i + 1; j < m; ++j) {
        if (i == 0 && j == m - 1) continue;
        std::vector<Point> sub_z(zs.begin() + i, zs.begin() + j + 1);
        std::vector<Point> sub_u(us.begin() + i, us.begin() + j);
        DifferenceResult sub = delta_n(f, sub_z, sub_u, tol, false);
        res = std::max(res,
                       spectral_norm(out.full_grid[i][j] - sub.value));
      }
  }
  out.value = out.full_grid[0][m - 1];
  out.structure_residual = res;
  return out;
}

// Delta^k f(0)(u,..,u) along the diagonal at a single point.
inline Matrix delta_power(const MatricialFunction& f, const Point& base,
                          const Point& dir, int k) {
  if (k == 0) return f(base);
  std::vector<Point> zs(k + 1, base);
  std::vector<Point> us(k, dir);
  return delta_n(f, zs, us).value;
}

// Degree-k coefficients recovered from corners of bidiagonal evaluations at
// level 1 with scaled standard basis directions; the corner is exactly
// homogeneous of degree k in the directions, so the scaling unwinds without
// loss.
inline std::map<Word, Complex, WordGradedLess> taylor_coeffs(
    const MatricialFunction& f, int k, std::int64_t cap = kWordCap) {
  require(k >= 0, "taylor_coeffs: k must be >= 0");
  require(f.domain_radius > 0.0, "taylor_coeffs: empty domain");
  std::map<Word, Complex, WordGradedLess> out;
  const Point zero1 = Point::zero(f.d, 1);
  if (k == 0) {
    out.emplace(Word{}, f(zero1)(0, 0));
    return out;
  }
  std::int64_t count = 1;
  for (int t = 0; t < k; ++t) {
    count *= f.d;
    if (count > cap) throw std::length_error("taylor_coeffs: word cap exceeded");
  }
  const double s = std::isinf(f.domain_radius) ? 1.0 : f.domain_radius / 4.0;
  const double unscale = std::pow(s, -k);
  const std::vector<Point> zs(k + 1, zero1);

  std::vector<int> letters(k, 1);
  while (true) {
    std::vector<Point> us;
    us.reserve(k);
    for (int j = 0; j < k; ++j) us.push_back(Point::basis(f.d, letters[j]).scaled(s));
    Matrix corner = delta_n(f, zs, us).value;
    Complex a = corner(0, 0) * unscale;
    if (a != Complex(0.0, 0.0)) out.emplace(Word(letters), a);
    int pos = k - 1;
    while (pos >= 0 && letters[pos] == f.d) letters[pos--] = 1;
    if (pos < 0) break;
    ++letters[pos];
  }
  return out;
}

// Series assembled from the recovered coefficients up to degree k_max.
inline FreeSeries taylor_expand(const MatricialFunction& f, int k_max,
                                std::int64_t cap = kWordCap) {
  FreeSeries s(f.d);
  for (int k = 0; k <= k_max; ++k)
    for (const auto& [w, c] : taylor_coeffs(f, k, cap)) s.add(w, c);
  return s;
}

// f(z+w) against the order-n expansion at z plus the exact remainder term
// Delta^n f(z,..,z,z+w)(w,..,w).  Exact for polynomials.
inline CheckReport remainder_check(const FreeSeries& s, const Point& z,
                                   const Point& w, int n,
                                   double tol = kDefaultTol) {
  require(n >= 1, "remainder_check: n must be >= 1");
  MatricialFunction f = series_function(s);
  CheckReport report{"taylor_remainder", tol, {}};

  Matrix lhs = f(z + w);
  Matrix rhs = f(z);
  for (int k = 1; k <= n - 1; ++k)
    rhs += delta_power(f, z, w, k);
  std::vector<Point> zs(n, z);
  zs.push_back(z + w);
  std::vector<Point> us(n, w);
  rhs += delta_n(f, zs, us).value;
  report.add("remainder identity (n=" + std::to_string(n) + ")",
             spectral_norm(lhs - rhs));
  return report;
}

// Additivity, scalar homogeneity and the balanced law of the first-order
// difference, sampled with a seeded generator.
inline CheckReport additivity_check(const MatricialFunction& f, const Point& z,
                                    const Point& w, const Point& u1,
                                    const Point& u2, double tol = kDefaultTol,
                                    unsigned seed = 0) {
  Rng rng(seed);
  CheckReport report{"delta_additivity", tol, {}};

  Matrix sum = delta1(f, z, w, u1 + u2).value;
  Matrix split = delta1(f, z, w, u1).value + delta1(f, z, w, u2).value;
  report.add("additivity", spectral_norm(sum - split));

  Complex t = random_complex(rng);
  Matrix scaled = delta1(f, z, w, u1.scaled(t)).value;
  report.add("homogeneity", spectral_norm(scaled - t * delta1(f, z, w, u1).value));

  // b must commute with every component of z; a polynomial in Z_1 works when
  // d = 1, otherwise only scalars are available for generic z.
  Matrix b;
  if (f.d == 1)
    b = random_complex(rng) * Matrix::Identity(z.rows(), z.rows()) +
        random_complex(rng) * z[0];
  else
    b = random_complex(rng) * Matrix::Identity(z.rows(), z.rows());
  std::vector<Matrix> bu;
  bu.reserve(f.d);
  for (int i = 0; i < f.d; ++i) bu.push_back(b * u1[i]);
  Matrix left = delta1(f, z, w, Point(f.d, std::move(bu))).value;
  report.add("balanced law", spectral_norm(left - b * delta1(f, z, w, u1).value));
  return report;
}

// Delta^k at level n on elementary-tensor directions E_{r,s} (x) u against
// the level-1 value placed at E_{r(1),s(k)}; mismatched chains must give 0.
inline CheckReport amplification_check(const MatricialFunction& f, int k, int n,
                                       int trials, double tol = 1e-10,
                                       unsigned seed = 0) {
  require(k >= 1 && n >= 1, "amplification_check: k,n must be >= 1");
  Rng rng(seed);
  CheckReport report{"amplification", tol, {}};
  const double s =
      (std::isinf(f.domain_radius) ? 1.0 : f.domain_radius / 4.0) /
      std::sqrt(static_cast<double>(f.d));
  const double unscale = std::pow(s, -k);
  const Point zero1 = Point::zero(f.d, 1);
  const Point zeron = Point::zero(f.d, n);
  std::uniform_int_distribution<int> pick(0, n - 1);

  for (int trial = 0; trial < trials; ++trial) {
    std::vector<int> r(k), sdx(k);
    std::vector<Point> scalar_dirs;
    for (int j = 0; j < k; ++j) {
      r[j] = pick(rng);
      sdx[j] = pick(rng);
      std::vector<Matrix> comps;
      for (int i = 0; i < f.d; ++i) {
        Matrix m(1, 1);
        m(0, 0) = random_complex(rng);
        comps.push_back(std::move(m));
      }
      scalar_dirs.emplace_back(f.d, std::move(comps));
    }
    // Force a chain-compatible draw on even trials.
    const bool force_chain = trial % 2 == 0;
    if (force_chain)
      for (int j = 0; j + 1 < k; ++j) r[j + 1] = sdx[j];
    bool chain = true;
    for (int j = 0; j + 1 < k; ++j) chain = chain && (sdx[j] == r[j + 1]);

    std::vector<Point> big_dirs;
    for (int j = 0; j < k; ++j) {
      std::vector<Matrix> comps;
      for (int i = 0; i < f.d; ++i) {
        Matrix m = Matrix::Zero(n, n);
        m(r[j], sdx[j]) = scalar_dirs[j][i](0, 0) * s;
        comps.push_back(std::move(m));
      }
      big_dirs.emplace_back(f.d, std::move(comps));
    }
    Matrix corner =
        delta_n(f, std::vector<Point>(k + 1, zeron), big_dirs).value * unscale;

    Matrix expected = Matrix::Zero(n, n);
    if (chain) {
      std::vector<Point> small_dirs;
      for (int j = 0; j < k; ++j) small_dirs.push_back(scalar_dirs[j].scaled(s));
      Matrix small =
          delta_n(f, std::vector<Point>(k + 1, zero1), small_dirs).value *
          unscale;
      expected(r[0], sdx[k - 1]) = small(0, 0);
    }
    report.add(std::string(chain ? "chain" : "broken chain") + " trial " +
                   std::to_string(trial),
               spectral_norm(corner - expected));
  }
  return report;
}

// Sampled ||Delta^k f(0)(u_1,..,u_k)|| against the bound M / r^k that a
// uniform bound M on the radius-r ball forces on the multilinear form.
inline CheckReport cb_bound_sample(const MatricialFunction& f, double M,
                                   double r, int k, int trials,
                                   unsigned seed = 0) {
  require(r > 0.0 && r <= f.domain_radius, "cb_bound_sample: bad radius");
  Rng rng(seed);
  const double bound = M / std::pow(r, k) * (1.0 + 1e-8);
  CheckReport report{"cb_bound", bound, {}};
  const double s = r / 2.0;
  const double unscale = std::pow(s, -k);
  std::uniform_int_distribution<int> lvl(1, 3);

  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const Index n = lvl(rng);
    std::vector<Point> us;
    for (int j = 0; j < k; ++j)
      us.push_back(random_point_with_norm(rng, f.d, n, 1.0).scaled(s));
    Matrix corner =
        delta_n(f, std::vector<Point>(k + 1, Point::zero(f.d, n)), us).value;
    worst = std::max(worst, spectral_norm(corner) * unscale);
  }
  report.add("max sampled ||Delta^" + std::to_string(k) + " f(0)|| over " +
                 std::to_string(trials) + " trials",
             worst);
  return report;
}

// Three routes to the derivative: block corner, algebraic word formula, and
// a central finite difference.
inline CheckReport frechet_check(const FreeSeries& s, const Point& z,
                                 const Point& u, double tol_fd = 1e-6,
                                 double tol_algebraic = 1e-10) {
  MatricialFunction f = series_function(s);
  CheckReport report{"frechet_triangle", tol_fd, {}};

  Matrix block = delta1(f, z, z, u).value;
  const int k_max = s.finitely_supported() ? s.max_degree() : 600;
  Matrix algebraic = directional_derivative(s, z, u, k_max);
  const double h = 1e-5;
  Matrix fd = (f(z + u.scaled(h)) - f(z - u.scaled(h))) / (2.0 * h);

  // The algebraic pair must agree to tol_algebraic; rescale its residual so
  // one report-level tolerance enforces both bounds.
  report.add("block vs algebraic (residual x fd/algebraic tolerance ratio)",
             spectral_norm(block - algebraic) * (tol_fd / tol_algebraic));
  report.add("block vs finite difference", spectral_norm(block - fd));
  return report;
}

}  // namespace ncfree
