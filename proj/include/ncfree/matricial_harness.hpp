#pragma once

// Intertwiner catalogs and the property suites that exercise the defining
// conditions of matricial families of sets, functions and maps.  Negative
// controls ship alongside: a harness that cannot fail proves nothing.

#include "ncfree/check_report.hpp"
#include "ncfree/nc_core.hpp"
#include "ncfree/taylor_calc.hpp"

namespace ncfree {

struct IntertwinerCatalog {
  std::vector<IntertwinerCertificate> entries;
};

// Catalog of certified intertwiners between points derived from z and w:
// identity and scalars on equal points, block embeddings/projections into
// the direct sum, summand permutations, similarity-built targets
// W_i = S Z_i S^{-1}, and the column embedding into an upper block point.
// Similarity targets can leave the unit ball, so each entry stores points
// rescaled by a common factor to fit the requested domain radius
// (intertwining is scale-equivariant).
inline IntertwinerCatalog build_catalog(const Point& z, const Point& w,
                                        unsigned seed,
                                        double domain_radius = 1.0,
                                        double tol = kDefaultTol) {
  require(z.d() == w.d(), "build_catalog: alphabet mismatch");
  require(z.square() && w.square(), "build_catalog: points must be square");
  Rng rng(seed);
  IntertwinerCatalog cat;

  auto fit = [&](const Point& a, const Point& b, const Matrix& c,
                 const std::string& tag) {
    double r = std::max(row_norm(a), row_norm(b));
    double t = 1.0;
    if (std::isfinite(domain_radius) && r >= domain_radius * 0.98)
      t = domain_radius * 0.5 / std::max(r, 1e-30);
    cat.entries.push_back(
        certify_intertwiner(c, a.scaled(t), b.scaled(t), tol, tag));
  };

  const Index n = z.rows(), m = w.rows();

  fit(z, z, Matrix::Identity(n, n), "identity");
  fit(z, z, random_complex(rng) * Matrix::Identity(n, n), "scalar");

  Point zw = direct_sum(z, w);
  Matrix embed = Matrix::Zero(n + m, n);
  embed.topRows(n) = Matrix::Identity(n, n);
  fit(z, zw, embed, "embedding");
  Matrix proj = Matrix::Zero(n, n + m);
  proj.leftCols(n) = Matrix::Identity(n, n);
  fit(zw, z, proj, "projection");

  Point zz = direct_sum(z, z);
  Matrix swap = Matrix::Zero(2 * n, 2 * n);
  swap.topRightCorner(n, n) = Matrix::Identity(n, n);
  swap.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
  fit(zz, zz, swap, "permutation");

  Matrix S = random_well_conditioned(rng, n);
  Matrix Sinv = S.inverse();
  std::vector<Matrix> sim;
  sim.reserve(z.d());
  for (int i = 0; i < z.d(); ++i) sim.push_back(S * z[i] * Sinv);
  fit(z, Point(z.d(), std::move(sim)), S, "similarity");

  std::vector<Matrix> umats;
  umats.reserve(z.d());
  for (int i = 0; i < z.d(); ++i) umats.push_back(random_matrix(rng, n, m));
  Point u(z.d(), std::move(umats));
  double un = row_norm(u);
  if (un > 0) u = u.scaled(0.25 / un);
  Point blocked = upper_block(z, w, u);
  Matrix col = Matrix::Zero(n + m, n);
  col.topRows(n) = Matrix::Identity(n, n);
  fit(z, blocked, col, "column");

  return cat;
}

// Residuals ||C f(z) - f(w) C|| over the catalog.  Entries whose points fall
// outside the declared domain are skipped with a note.
inline CheckReport check_function_matricial(const MatricialFunction& f,
                                            const IntertwinerCatalog& catalog,
                                            double tol = kDefaultTol) {
  CheckReport report{"function_matricial", tol, {}};
  for (const auto& e : catalog.entries) {
    if (row_norm(e.source) >= f.domain_radius ||
        row_norm(e.target) >= f.domain_radius) {
      report.add(e.provenance + " (skipped: outside domain)", 0.0);
      continue;
    }
    Matrix lhs = e.C * f(e.source);
    Matrix rhs = f(e.target) * e.C;
    report.add(e.provenance, spectral_norm(lhs - rhs));
  }
  return report;
}

// ||f(z (+) w) - f(z) (+) f(w)||.
inline CheckReport check_direct_sum(const MatricialFunction& f, const Point& z,
                                    const Point& w, double tol = kDefaultTol) {
  CheckReport report{"direct_sum", tol, {}};
  Matrix big = f(direct_sum(z, w));
  Matrix expected = Matrix::Zero(big.rows(), big.cols());
  expected.topLeftCorner(z.rows(), z.rows()) = f(z);
  expected.bottomRightCorner(w.rows(), w.rows()) = f(w);
  report.add("block diagonal image", spectral_norm(big - expected));
  return report;
}

// Componentwise residuals ||C g(z)_i - g(w)_i C|| for tuple-valued families.
inline CheckReport check_map_matricial(const MatricialMap& g,
                                       const IntertwinerCatalog& catalog,
                                       double tol = kDefaultTol) {
  CheckReport report{"map_matricial", tol, {}};
  for (const auto& e : catalog.entries) {
    if (row_norm(e.source) >= g.domain_radius ||
        row_norm(e.target) >= g.domain_radius) {
      report.add(e.provenance + " (skipped: outside domain)", 0.0);
      continue;
    }
    Point gz = g(e.source);
    Point gw = g(e.target);
    double res = 0.0;
    for (int i = 0; i < g.d; ++i)
      res = std::max(res, spectral_norm(e.C * gz[i] - gw[i] * e.C));
    report.add(e.provenance, res);
  }
  return report;
}

// d = 1 resolvent family f(z) = (I - z)^{-1}: matricial on every catalog
// inside the open unit ball, yet unbounded as the boundary is approached.
// The blowup samples certify sup ||f|| >= 10^m / 2 at distance 10^{-m}.
inline MatricialFunction resolvent_function() {
  return MatricialFunction{
      1, 1.0, [](const Point& z) -> Matrix {
        Matrix a = Matrix::Identity(z.rows(), z.rows()) - z[0];
        Eigen::FullPivLU<Matrix> lu(a);
        require(lu.isInvertible(), "resolvent: I - z is singular");
        return lu.inverse();
      }};
}

inline CheckReport resolvent_counterexample(Index level, int samples,
                                            unsigned seed = 0,
                                            double tol = kDefaultTol) {
  Rng rng(seed);
  CheckReport report{"resolvent_counterexample", tol, {}};
  MatricialFunction f = resolvent_function();

  for (int t = 0; t < samples; ++t) {
    Point z = random_point_with_norm(rng, 1, level, 0.5);
    Point w = random_point_with_norm(rng, 1, level, 0.4);
    IntertwinerCatalog cat = build_catalog(z, w, seed + 100 + t, 1.0, tol);
    CheckReport inner = check_function_matricial(f, cat, tol);
    report.add("matriciality sample " + std::to_string(t),
               inner.max_residual());
  }

  for (int m = 1; m <= 6; ++m) {
    const double eps = std::pow(10.0, -m);
    // Diagonal point at distance eps from the boundary in a random frame.
    Matrix u = random_unitary(rng, level);
    Matrix zm = u * ((1.0 - eps) * Matrix::Identity(level, level)) * u.adjoint();
    std::vector<Matrix> comp{zm};
    double norm_here = spectral_norm(f(Point(1, std::move(comp))));
    report.add_must_exceed("blowup 10^-" + std::to_string(m) +
                               " from boundary",
                           norm_here, std::pow(10.0, m) / 2.0);
  }
  return report;
}

// --- negative controls -------------------------------------------------------

// Entrywise absolute value: not matricial (fails on similarity entries).
inline MatricialFunction control_entrywise_abs(int d) {
  return MatricialFunction{d, std::numeric_limits<double>::infinity(),
                           [](const Point& z) -> Matrix {
                             return z[0].cwiseAbs().cast<Complex>();
                           }};
}

// trace(Z_1) I: respects similarities but not direct sums.
inline MatricialFunction control_trace(int d) {
  return MatricialFunction{d, std::numeric_limits<double>::infinity(),
                           [](const Point& z) -> Matrix {
                             return z[0].trace() *
                                    Matrix::Identity(z.rows(), z.rows());
                           }};
}

// Componentwise transpose map: fails on similarity entries.
inline MatricialMap control_transpose(int d) {
  return MatricialMap{d, std::numeric_limits<double>::infinity(),
                      [](const Point& z) {
                        std::vector<Matrix> ms;
                        ms.reserve(z.d());
                        for (int i = 0; i < z.d(); ++i)
                          ms.push_back(z[i].transpose());
                        return Point(z.d(), std::move(ms));
                      }};
}

}  // namespace ncfree
