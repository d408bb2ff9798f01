#pragma once

// Truncated Fock space over C^d: the l2 space of words of length <= N with
// creation operators, word-series Toeplitz operators, the gauge unitary
// group, its Fourier coefficient projections, Cesaro sums, and the scaled
// creation tuple used in convergence experiments.

#include "ncfree/free_series.hpp"
#include "ncfree/nc_core.hpp"

#include <cstdlib>

namespace ncfree {

inline Index fock_dim_cap() {
  if (const char* env = std::getenv("NCFUNC_MAX_DIM")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<Index>(v);
  }
  return 4096;
}

// Words of length <= N, graded then lexicographic; the ordering is part of
// the serialized contract and stable across versions.
class FockBasis {
 public:
  FockBasis(int d, int N) : d_(d), N_(N) {
    require(d >= 1, "FockBasis: alphabet size must be >= 1");
    require(N >= 0, "FockBasis: truncation must be >= 0");
    offsets_.resize(N + 2, 0);
    Index dim = 0, level = 1;
    for (int k = 0; k <= N; ++k) {
      offsets_[k] = dim;
      dim += level;
      require(dim <= fock_dim_cap(), "FockBasis: dimension cap exceeded");
      level *= d;
    }
    offsets_[N + 1] = dim;
  }

  int d() const { return d_; }
  int N() const { return N_; }
  Index dim() const { return offsets_[N_ + 1]; }

  Index index(const Word& w) const {
    require(w.degree() <= N_, "FockBasis: word longer than truncation");
    require(w.valid_for(d_), "FockBasis: letter out of range");
    Index r = 0;
    for (int l : w.letters) r = r * d_ + (l - 1);
    return offsets_[w.degree()] + r;
  }

  Word word(Index idx) const {
    require(idx >= 0 && idx < dim(), "FockBasis: index out of range");
    int k = 0;
    while (offsets_[k + 1] <= idx) ++k;
    Index r = idx - offsets_[k];
    std::vector<int> letters(k);
    for (int j = k - 1; j >= 0; --j) {
      letters[j] = static_cast<int>(r % d_) + 1;
      r /= d_;
    }
    return Word(std::move(letters));
  }

  int degree_of(Index idx) const { return word(idx).degree(); }

  bool operator==(const FockBasis& o) const { return d_ == o.d_ && N_ == o.N_; }

 private:
  int d_, N_;
  std::vector<Index> offsets_;
};

struct FockOperator {
  FockBasis basis;
  Matrix mat;

  FockOperator(FockBasis b, Matrix m) : basis(std::move(b)), mat(std::move(m)) {
    require(mat.rows() == basis.dim() && mat.cols() == basis.dim(),
            "FockOperator: shape must match basis dimension");
  }
};

// Creation by the i-th generator: delta_w -> delta_{iw}, compressed to the
// truncated space (top-degree words map to zero).
inline FockOperator creation(const FockBasis& basis, int i) {
  require(i >= 1 && i <= basis.d(), "creation: letter out of range");
  Matrix m = Matrix::Zero(basis.dim(), basis.dim());
  for (Index col = 0; col < basis.dim(); ++col) {
    Word w = basis.word(col);
    if (w.degree() >= basis.N()) continue;
    Word iw;
    iw.letters.push_back(i);
    iw.letters.insert(iw.letters.end(), w.letters.begin(), w.letters.end());
    m(basis.index(iw), col) = Complex(1.0, 0.0);
  }
  return FockOperator(basis, std::move(m));
}

// sum_w a_w S_w for a finitely supported series of degree <= N.
inline FockOperator toeplitz(const FockBasis& basis, const FreeSeries& s) {
  require(s.d() == basis.d(), "toeplitz: alphabet mismatch");
  require(s.finitely_supported() ||
              (s.generator() && s.generator()->kind == GeneratorKind::Luminet),
          "toeplitz: series must be finitely supported");
  require(s.max_degree() <= basis.N(), "toeplitz: degree exceeds truncation");
  Matrix m = Matrix::Zero(basis.dim(), basis.dim());
  for (const auto& [w, c] : s.coeffs()) {
    for (Index col = 0; col < basis.dim(); ++col) {
      Word v = basis.word(col);
      if (w.degree() + v.degree() > basis.N()) continue;
      m(basis.index(w.concat(v)), col) += c;
    }
  }
  return FockOperator(basis, std::move(m));
}

// The gauge unitary W_t = sum_k e^{ikt} P_k (diagonal phase by degree).
inline FockOperator gauge(const FockBasis& basis, double t) {
  Matrix m = Matrix::Zero(basis.dim(), basis.dim());
  for (Index j = 0; j < basis.dim(); ++j)
    m(j, j) = std::exp(Complex(0.0, basis.degree_of(j) * t));
  return FockOperator(basis, std::move(m));
}

enum class FourierMode { Mask, Quadrature };

// Fourier coefficient Phi_j(F) = (1/2pi) int e^{-ijt} W_t F W_t^* dt.  Mask
// mode keeps the entries with degree difference j; quadrature mode averages
// over 2N+1 uniform nodes.  The integrand is a trigonometric polynomial of
// degree <= N in t, so both modes agree to rounding.
inline FockOperator fourier(const FockOperator& f, int j,
                            FourierMode mode = FourierMode::Mask) {
  const FockBasis& basis = f.basis;
  if (std::abs(j) > basis.N())
    return FockOperator(basis, Matrix::Zero(basis.dim(), basis.dim()));
  if (mode == FourierMode::Mask) {
    Matrix m = Matrix::Zero(basis.dim(), basis.dim());
    for (Index r = 0; r < basis.dim(); ++r)
      for (Index c = 0; c < basis.dim(); ++c)
        if (basis.degree_of(r) - basis.degree_of(c) == j) m(r, c) = f.mat(r, c);
    return FockOperator(basis, std::move(m));
  }
  const int Q = 2 * basis.N() + 1;
  Matrix acc = Matrix::Zero(basis.dim(), basis.dim());
  for (int q = 0; q < Q; ++q) {
    const double t = 2.0 * M_PI * q / Q;
    FockOperator wt = gauge(basis, t);
    acc += std::exp(Complex(0.0, -j * t)) * (wt.mat * f.mat * wt.mat.adjoint());
  }
  return FockOperator(basis, acc / static_cast<double>(Q));
}

// Fejer-weighted partial sum sum_{|j|<k} (1 - |j|/k) Phi_j(F).
inline FockOperator cesaro(const FockOperator& f, int k) {
  require(k >= 1, "cesaro: k must be >= 1");
  const FockBasis& basis = f.basis;
  Matrix acc = Matrix::Zero(basis.dim(), basis.dim());
  const int jmax = std::min(k - 1, basis.N());
  for (int j = -jmax; j <= jmax; ++j) {
    const double weight = 1.0 - std::abs(j) / static_cast<double>(k);
    acc += weight * fourier(f, j, FourierMode::Mask).mat;
  }
  return FockOperator(basis, std::move(acc));
}

// The tuple (r S_1, .., r S_d) at level dim(basis): the scaled creation
// point driving the convergence/divergence experiments.
inline Point shift_point(const FockBasis& basis, double r) {
  require(r >= 0.0, "shift_point: r must be >= 0");
  std::vector<Matrix> ms;
  ms.reserve(basis.d());
  for (int i = 1; i <= basis.d(); ++i) ms.push_back(r * creation(basis, i).mat);
  return Point(basis.d(), std::move(ms));
}

// The vacuum basis vector.
inline Eigen::VectorXcd vacuum(const FockBasis& basis) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(basis.dim());
  v(0) = Complex(1.0, 0.0);
  return v;
}

}  // namespace ncfree
