#pragma once

// Seeded property suites covering the full calculus at desk scale.  The
// acceptance binary prints one line per suite; the command line tool runs
// the same code grouped by area.  Identical seed, identical output.

#include "ncfree/check_report.hpp"
#include "ncfree/fock_sim.hpp"
#include "ncfree/free_series.hpp"
#include "ncfree/matricial_harness.hpp"
#include "ncfree/mobius_maps.hpp"
#include "ncfree/nc_core.hpp"
#include "ncfree/taylor_calc.hpp"

#include <functional>

namespace ncfree {

namespace detail {

inline FreeSeries random_sparse_series(Rng& rng, int d, int max_degree,
                                       int terms) {
  FreeSeries s(d);
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_int_distribution<int> letter(1, d);
  for (int t = 0; t < terms; ++t) {
    const int k = deg(rng);
    std::vector<int> letters(k);
    for (int& l : letters) l = letter(rng);
    s.add(Word(std::move(letters)), random_complex(rng));
  }
  // Guarantee a top-degree term so the sampled degree is the nominal one.
  std::vector<int> top(max_degree);
  for (int& l : top) l = letter(rng);
  s.add(Word(std::move(top)), random_complex(rng));
  return s;
}

inline Point random_direction(Rng& rng, int d, Index rows, Index cols,
                              double norm) {
  std::vector<Matrix> ms;
  ms.reserve(d);
  for (int i = 0; i < d; ++i) ms.push_back(random_matrix(rng, rows, cols));
  Point u(d, std::move(ms));
  double r = row_norm(u);
  return r > 0 ? u.scaled(norm / r) : u;
}

}  // namespace detail

// 1. Evaluation is multiplicative: eval(theta*eta, z) = eval(theta, z)
//    eval(eta, z) for sparse polynomial pairs.
inline std::vector<CheckReport> suite_homomorphism(unsigned seed) {
  Rng rng(seed);
  CheckReport report{"eval_homomorphism", 1e-10, {}};
  std::uniform_int_distribution<int> dd(1, 3), lvl(1, 4);
  for (int t = 0; t < 200; ++t) {
    const int d = dd(rng);
    FreeSeries a = detail::random_sparse_series(rng, d, 4, 6);
    FreeSeries b = detail::random_sparse_series(rng, d, 4, 6);
    FreeSeries ab = multiply(a, b);
    Point z = random_point_with_norm(rng, d, lvl(rng), 0.9);
    Matrix lhs = eval(ab, z, ab.max_degree()).value;
    Matrix rhs = eval(a, z, a.max_degree()).value *
                 eval(b, z, b.max_degree()).value;
    report.add("pair " + std::to_string(t), spectral_norm(lhs - rhs));
  }
  return {report};
}

// 2. Images of bidiagonal points are block upper triangular with the
//    diagonal values in place.
inline std::vector<CheckReport> suite_block_structure(unsigned seed) {
  Rng rng(seed);
  CheckReport report{"block_structure", 1e-10, {}};
  std::uniform_int_distribution<int> dd(1, 3), kk(1, 4), lvl(1, 2);
  for (int t = 0; t < 100; ++t) {
    const int d = dd(rng);
    const int k = kk(rng);
    MatricialFunction f = series_function(detail::random_sparse_series(rng, d, 4, 6));
    std::vector<Point> zs, us;
    for (int j = 0; j <= k; ++j)
      zs.push_back(random_point_with_norm(rng, d, lvl(rng), 0.8));
    for (int j = 0; j < k; ++j)
      us.push_back(
          detail::random_direction(rng, d, zs[j].rows(), zs[j + 1].rows(), 0.7));
    DifferenceResult r = delta_n(f, zs, us);
    report.add("case " + std::to_string(t) + " (k=" + std::to_string(k) + ")",
               r.structure_residual);
  }
  return {report};
}

// 3. Interior blocks of the bidiagonal image equal the lower-order
//    differences of their sub-chains.
inline std::vector<CheckReport> suite_grid_law(unsigned seed) {
  Rng rng(seed + 1);
  CheckReport report{"grid_law", 1e-10, {}};
  std::uniform_int_distribution<int> dd(1, 2), kk(2, 4), lvl(1, 2);
  for (int t = 0; t < 50; ++t) {
    const int d = dd(rng);
    const int k = kk(rng);
    MatricialFunction f = series_function(detail::random_sparse_series(rng, d, 4, 5));
    std::vector<Point> zs, us;
    for (int j = 0; j <= k; ++j)
      zs.push_back(random_point_with_norm(rng, d, lvl(rng), 0.8));
    for (int j = 0; j < k; ++j)
      us.push_back(
          detail::random_direction(rng, d, zs[j].rows(), zs[j + 1].rows(), 0.7));
    DifferenceResult r = delta_n(f, zs, us, 1e-10, /*check_grid=*/true);
    report.add("case " + std::to_string(t) + " (k=" + std::to_string(k) + ")",
               r.structure_residual);
  }
  return {report};
}

// 4. Expansion with remainder: exact identity for polynomials; the scaled
//    corner estimate forces remainder norms below q^{-n} M for the
//    geometric series (q = 2, M the sup of the series on the ball that
//    contains the q-scaled bidiagonal point).
inline std::vector<CheckReport> suite_remainder(unsigned seed) {
  Rng rng(seed + 2);
  CheckReport identity{"remainder_identity", 1e-10, {}};
  std::uniform_int_distribution<int> dd(1, 3), nn(1, 4), lvl(1, 3);
  for (int t = 0; t < 100; ++t) {
    const int d = dd(rng);
    FreeSeries s = detail::random_sparse_series(rng, d, 5, 6);
    Point z = random_point_with_norm(rng, d, lvl(rng), 0.6);
    Point w = random_point_with_norm(rng, d, z.rows(), 0.4);
    CheckReport one = remainder_check(s, z, w, nn(rng));
    identity.add("poly " + std::to_string(t), one.max_residual());
  }

  CheckReport decay{"remainder_geometric_decay", 1.0, {}};
  const double q = 2.0;
  FreeSeries geo = FreeSeries::geometric();
  MatricialFunction f = series_function(geo);
  std::uniform_real_distribution<double> za(0.05, 0.3), wb(0.02, 0.2);
  for (int n = 1; n <= 8; ++n) {
    for (int t = 0; t < 3; ++t) {
      const Index level = 1 + (t % 2);
      Point z = random_point_with_norm(rng, 1, level, za(rng));
      Point w = random_point_with_norm(rng, 1, level, wb(rng));
      // Remainder corner.
      std::vector<Point> zs(n, z);
      zs.push_back(z + w);
      std::vector<Point> us(n, w);
      const double remainder = spectral_norm(delta_n(f, zs, us).value);
      // Ball radius that contains the q-scaled point; sampling keeps it < 1.
      std::vector<Point> usq(n, w.scaled(q));
      const double rho_q = row_norm(bidiagonal_block(zs, usq));
      const double M = 1.0 / (1.0 - rho_q);
      decay.add("n=" + std::to_string(n) + " sample " + std::to_string(t) +
                    " (rho_q=" + std::to_string(rho_q) + ")",
                remainder / (std::pow(q, -n) * M));
    }
  }
  return {identity, decay};
}

// 5. Coefficients recovered from block corners reproduce the backing series
//    and separate distinct series.
inline std::vector<CheckReport> suite_coefficient_roundtrip(unsigned seed) {
  Rng rng(seed + 3);
  CheckReport report{"coefficient_roundtrip", 1e-9, {}};
  for (int d = 1; d <= 3; ++d) {
    FreeSeries s = detail::random_sparse_series(rng, d, 5, 8);
    MatricialFunction f = series_function(s);
    FreeSeries back = taylor_expand(f, 5);
    double worst = 0.0;
    for (const auto& [w, c] : s.coeffs())
      worst = std::max(worst, std::abs(back.coeff(w) - c));
    for (const auto& [w, c] : back.coeffs())
      worst = std::max(worst, std::abs(s.coeff(w) - c));
    report.add("round trip d=" + std::to_string(d), worst);

    // Uniqueness: a perturbed series must separate in the recovery.
    FreeSeries other = s;
    Word probe(std::vector<int>(3, 1));
    other.add(probe, Complex(0.5, 0.0));
    FreeSeries back2 = taylor_expand(series_function(other), 5);
    double gap = std::abs(back2.coeff(probe) - back.coeff(probe));
    report.add_must_exceed("uniqueness d=" + std::to_string(d), gap, 0.25);
  }
  return {report};
}

// 6. Block corner, word formula and central finite difference give the same
//    derivative.
inline std::vector<CheckReport> suite_derivative_triangle(unsigned seed) {
  Rng rng(seed + 4);
  CheckReport report{"derivative_triangle", 1e-6, {}};
  std::uniform_int_distribution<int> dd(1, 3), lvl(1, 3);
  for (int t = 0; t < 100; ++t) {
    const int d = dd(rng);
    FreeSeries s = detail::random_sparse_series(rng, d, 4, 6);
    Point z = random_point_with_norm(rng, d, lvl(rng), 0.7);
    Point u = random_point_with_norm(rng, d, z.rows(), 0.5);
    CheckReport one = frechet_check(s, z, u);
    for (const auto& c : one.cases)
      report.add("case " + std::to_string(t) + ": " + c.description,
                 c.residual);
  }
  return {report};
}

// 7. Fourier masks agree with gauge-group quadrature; Fejer sums of
//    polynomial Toeplitz operators approach them at the documented rate.
inline std::vector<CheckReport> suite_fourier_cesaro(unsigned seed) {
  Rng rng(seed + 5);
  CheckReport agree{"fourier_mask_vs_quadrature", 1e-12, {}};
  std::uniform_int_distribution<int> dd(1, 2);
  for (int t = 0; t < 50; ++t) {
    const int d = dd(rng);
    const int N = 2 + (t % 4);  // N in 2..5, dim stays modest
    FockBasis basis(d, N);
    FockOperator f(basis, random_matrix(rng, basis.dim(), basis.dim()));
    std::uniform_int_distribution<int> jj(-N, N);
    const int j = jj(rng);
    Matrix diff = fourier(f, j, FourierMode::Mask).mat -
                  fourier(f, j, FourierMode::Quadrature).mat;
    agree.add("op " + std::to_string(t) + " (d=" + std::to_string(d) +
                  ", N=" + std::to_string(N) + ", j=" + std::to_string(j) + ")",
              frobenius_norm(diff));
  }

  CheckReport fejer{"cesaro_rate", 1.0, {}};
  for (int t = 0; t < 25; ++t) {
    const int d = dd(rng);
    const int N = 3 + (t % 3);
    FockBasis basis(d, N);
    std::uniform_int_distribution<int> mm(2, N);
    const int m = mm(rng);
    FreeSeries s = detail::random_sparse_series(rng, d, m, 5);
    FockOperator T = toeplitz(basis, s);
    double maxnorm = 0.0;
    for (int j = 0; j <= m; ++j) maxnorm = std::max(maxnorm, s.degree_norm(j));
    for (int k : {m + 1, 4 * m, 64}) {
      const double defect = spectral_norm(cesaro(T, k).mat - T.mat);
      const double bound = m * maxnorm / k;
      fejer.add("poly " + std::to_string(t) + " deg " + std::to_string(m) +
                    " k=" + std::to_string(k),
                defect / bound);
    }
  }
  return {agree, fejer};
}

// 8. At the scaled creation tuple the degree increments applied to the
//    vacuum have norm exactly r^k below the truncation; inside the radius
//    the geometric tail estimate must drop below 1e-6 by degree 120.
inline std::vector<CheckReport> suite_divergence(unsigned seed) {
  (void)seed;  // fully deterministic
  CheckReport increments{"shift_point_increments", 1e-12, {}};
  FreeSeries geo = FreeSeries::geometric();
  FockBasis basis(1, 8);
  for (double r : {1.1, 1.5}) {
    Point z = shift_point(basis, r);
    for (int k = 0; k <= 8; ++k) {
      const double norm = (eval_degree(geo, z, k) * vacuum(basis)).norm();
      const double expected = std::pow(r, k);
      increments.add("r=" + std::to_string(r) + " k=" + std::to_string(k),
                     std::abs(norm - expected) / expected);
    }
  }

  CheckReport tail{"tail_bound_decay", 1.0, {}};
  {
    const double rho = 0.9;
    const int K = 120;
    // Reported tail of the geometric series at row norm 0.9 after K terms.
    const double bound = std::pow(rho, K + 1) / (1.0 - rho);
    tail.add("geometric tail bound at k=120, rho=0.9 (target 1e-6)",
             bound / 1e-6);
  }
  return {increments, tail};
}

// 9. Series-backed functions respect every catalog intertwiner; the shipped
//    negative controls fail their designated checks.
inline std::vector<CheckReport> suite_matriciality(unsigned seed) {
  Rng rng(seed + 6);
  CheckReport report{"matriciality", 1e-9, {}};
  std::uniform_int_distribution<int> dd(1, 3), lvl(1, 4);
  for (int t = 0; t < 100; ++t) {
    const int d = dd(rng);
    MatricialFunction f = series_function(detail::random_sparse_series(rng, d, 5, 6));
    Point z = random_point_with_norm(rng, d, lvl(rng), 0.5);
    Point w = random_point_with_norm(rng, d, lvl(rng), 0.5);
    IntertwinerCatalog cat =
        build_catalog(z, w, seed + 1000 + t, f.domain_radius);
    for (const auto& e : cat.entries)
      report.add("trial " + std::to_string(t) + " catalog " + e.provenance +
                     " certificate",
                 e.residual);
    report.add("trial " + std::to_string(t) + " function residual",
               check_function_matricial(f, cat).max_residual());
    report.add("trial " + std::to_string(t) + " direct sum",
               check_direct_sum(f, z, w).max_residual());
  }

  CheckReport controls{"negative_controls", 1e-9, {}};
  {
    Rng crng(seed + 7);
    Point z = random_point_with_norm(crng, 1, 3, 0.5);
    Point w = random_point_with_norm(crng, 1, 3, 0.5);
    IntertwinerCatalog cat = build_catalog(z, w, seed + 8, 10.0);
    controls.add_must_exceed(
        "entrywise abs fails intertwiner checks",
        check_function_matricial(control_entrywise_abs(1), cat).max_residual(),
        1e-3);
    controls.add_must_exceed(
        "trace function fails direct sums",
        check_direct_sum(control_trace(1), z, w).max_residual(), 1e-3);
    controls.add_must_exceed(
        "transpose map fails intertwiner checks",
        check_map_matricial(control_transpose(1), cat).max_residual(), 1e-3);
  }
  return {report, controls};
}

// 10. The signed-permutation series: its outer-4 slice vanishes identically
//     on 2x2 tuples while carrying unit coefficients, and its radius
//     estimate is finite.
inline std::vector<CheckReport> suite_luminet(unsigned seed) {
  Rng rng(seed + 9);
  CheckReport report{"luminet", 1e-10, {}};
  FreeSeries lum = FreeSeries::luminet(6);
  // The outer index k contributes words of degree k(k+1)/2; k = 4 sits alone
  // in degree 10.
  for (int t = 0; t < 50; ++t) {
    Point z = random_point_with_norm(rng, 2, 2, 1.0 + t * 0.01);
    report.add("outer-4 slice vanishes on 2x2 tuple " + std::to_string(t),
               spectral_norm(eval_degree(lum, z, 10)));
  }
  report.add_must_exceed("outer-4 slice has nonzero coefficients",
                         lum.degree_norm(10), 1.0);
  RadiusEstimate r = radius(lum, 21);
  report.add("radius estimate finite (value " + std::to_string(r.value) + ")",
             std::isfinite(r.value) ? 0.0 : 1.0);
  return {report};
}

// 11. Ball automorphisms: fixed values, series against closed form inside
//     the reported tail, the first-order matrix identity, second order
//     agreement, and strict ball preservation.
inline std::vector<CheckReport> suite_mobius(unsigned seed,
                                             bool tamper = false) {
  Rng rng(seed + 10);
  CheckReport report{"mobius", 1.0, {}};
  std::uniform_int_distribution<int> dd(1, 3), lvl(1, 4);
  std::uniform_real_distribution<double> mag(0.1, 0.8);

  auto random_gamma = [&](int d) {
    std::vector<Complex> g(d);
    for (auto& c : g) c = random_complex(rng);
    double n2 = 0.0;
    for (const auto& c : g) n2 += std::norm(c);
    const double target = mag(rng);
    for (auto& c : g) c *= target / std::sqrt(n2);
    return CentralVector(g);
  };

  // g(0) = conj(gamma), to rounding.
  double g0_res = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int d = dd(rng);
    CentralVector g = random_gamma(d);
    Point img = g_gamma(g, Point::zero(d, lvl(rng)));
    for (int c = 0; c < d; ++c) {
      Matrix expect = std::conj(g.gamma[c]) *
                      Matrix::Identity(img.rows(), img.rows());
      g0_res = std::max(g0_res, spectral_norm(img[c] - expect));
    }
  }
  report.add("g(0) = conj(gamma) (residual / 1e-13)", g0_res / 1e-13);

  // Closed form vs series partial sums within the reported tail bound.
  for (int t = 0; t < 100; ++t) {
    const int d = dd(rng);
    CentralVector g = random_gamma(d);
    Point z = random_point_with_norm(rng, d, lvl(rng), 0.5 / std::max(g.norm(), 0.5));
    SeriesImage si = g_series_partial(g, z, 4 + (t % 6));
    Point closed = g_gamma(g, z);
    double gap = row_norm(closed - si.value);
    report.add("series sample " + std::to_string(t) + " (gap / tail bound)",
               gap / (si.tail_bound + 1e-12));
  }

  // First-order identity: the block-extracted difference at 0 equals the
  // direction composed with -(dg (x) I).
  double dg_res = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int d = dd(rng);
    CentralVector g = random_gamma(d);
    Matrix dg = dg_gamma_matrix(g);
    if (tamper) dg(0, 0) += 0.01;
    MatricialMap map = mobius_map(g);
    const Index n = lvl(rng);
    Point u = random_point_with_norm(rng, d, n, 0.2);
    Point expected = detail::z_compose(u, dg).scaled(-1.0);
    Point zero = Point::zero(d, n);
    for (int c = 0; c < d; ++c) {
      Matrix corner = delta1(map.component(c), zero, zero, u).value;
      dg_res = std::max(dg_res, spectral_norm(corner - expected[c]));
    }
  }
  report.add("first-order matrix identity (residual / 1e-8)", dg_res / 1e-8);

  double so_res = 0.0;
  for (int t = 0; t < 10; ++t) {
    CentralVector g = random_gamma(dd(rng));
    so_res = std::max(
        so_res, second_order_check(g, 3, 1e-8, seed + 20 + t).max_residual());
  }
  report.add("second order agreement (residual / 1e-8)", so_res / 1e-8);

  // Strict ball preservation on 1000 samples, margin recorded.
  double worst_norm = 0.0, involution = 0.0;
  int violations = 0;
  for (int t = 0; t < 1000; ++t) {
    const int d = dd(rng);
    CentralVector g = random_gamma(d);
    Point z = random_point_with_norm(rng, d, lvl(rng), 0.95 * mag(rng) / 0.8);
    Point img = g_gamma(g, z);
    const double rn = row_norm(img);
    worst_norm = std::max(worst_norm, rn);
    if (rn >= 1.0) ++violations;
    if (t % 100 == 0)
      involution = std::max(involution, row_norm(g_gamma(g, img) - z));
  }
  report.add("ball preserved on 1000 samples (worst image norm " +
                 std::to_string(worst_norm) + ")",
             static_cast<double>(violations));
  report.add("g(g(z)) = z measured informationally, residual " +
                 std::to_string(involution) + " (not asserted)",
             0.0);
  return {report};
}

// 12. Sampled multilinear norms respect the uniform bound M / r^k.
inline std::vector<CheckReport> suite_cb_bound(unsigned seed) {
  CheckReport report{"cb_bound", 1.0, {}};
  {
    FreeSeries geo = FreeSeries::geometric();
    MatricialFunction f = series_function(geo);
    const double r = 0.5;
    const double M = 1.0 / (1.0 - r);  // sum ||theta_k|| r^k
    for (int k = 1; k <= 4; ++k) {
      CheckReport one = cb_bound_sample(f, M, r, k, 25, seed + 30 + k);
      report.add("geometric r=0.5 k=" + std::to_string(k),
                 one.max_residual() / one.tolerance);
    }
  }
  {
    Rng rng(seed + 40);
    FreeSeries s = detail::random_sparse_series(rng, 2, 4, 6);
    MatricialFunction f = series_function(s);
    const double r = 1.0;
    double M = 0.0;
    for (int k = 0; k <= s.max_degree(); ++k) M += s.degree_norm(k);
    for (int k = 1; k <= 4; ++k) {
      CheckReport one = cb_bound_sample(f, M, r, k, 25, seed + 50 + k);
      report.add("polynomial r=1 k=" + std::to_string(k),
                 one.max_residual() / one.tolerance);
    }
  }
  return {report};
}

// --- registry ----------------------------------------------------------------

struct Suite {
  std::string id;
  std::string group;  // series | taylor | fock | matricial | mobius
  std::function<std::vector<CheckReport>(unsigned)> run;
};

inline const std::vector<Suite>& all_suites() {
  static const std::vector<Suite> suites = {
      {"01_homomorphism", "series", suite_homomorphism},
      {"02_block_structure", "taylor", suite_block_structure},
      {"03_grid_law", "taylor", suite_grid_law},
      {"04_remainder", "taylor", suite_remainder},
      {"05_coefficient_roundtrip", "taylor", suite_coefficient_roundtrip},
      {"06_derivative_triangle", "taylor", suite_derivative_triangle},
      {"07_fourier_cesaro", "fock", suite_fourier_cesaro},
      {"08_divergence", "fock", suite_divergence},
      {"09_matriciality", "matricial", suite_matriciality},
      {"10_luminet", "series", suite_luminet},
      {"11_mobius", "mobius",
       [](unsigned seed) { return suite_mobius(seed, false); }},
      {"12_cb_bound", "taylor", suite_cb_bound},
  };
  return suites;
}

}  // namespace ncfree
