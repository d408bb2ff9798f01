#pragma once

// Dense complex matrix substrate for free function calculus: matrix tuples
// (points of the row-ball at every level), row norms, block assembly, direct
// sums and intertwiner certification.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncfree {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

constexpr double kDefaultTol = 1e-10;

inline bool is_finite(const Matrix& a) {
  return a.allFinite();
}

inline void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

// A word over the alphabet {1,..,d}; the empty word has degree 0.
struct Word {
  std::vector<int> letters;

  Word() = default;
  explicit Word(std::vector<int> ls) : letters(std::move(ls)) {}

  int degree() const { return static_cast<int>(letters.size()); }
  bool valid_for(int d) const {
    return std::all_of(letters.begin(), letters.end(),
                       [d](int l) { return l >= 1 && l <= d; });
  }
  Word concat(const Word& other) const {
    Word w(letters);
    w.letters.insert(w.letters.end(), other.letters.begin(), other.letters.end());
    return w;
  }
  bool operator==(const Word& o) const { return letters == o.letters; }
};

// Graded lexicographic order: first by length, then letter by letter.
struct WordGradedLess {
  bool operator()(const Word& a, const Word& b) const {
    if (a.letters.size() != b.letters.size())
      return a.letters.size() < b.letters.size();
    return a.letters < b.letters;
  }
};

// A d-tuple of equally shaped complex matrices. Square tuples are the points
// of the matrix row-ball at level n; rectangular tuples arise as directions
// between two levels inside block assemblies.
class Point {
 public:
  Point() = default;
  Point(int d, std::vector<Matrix> mats) : mats_(std::move(mats)) {
    require(d >= 1, "Point: alphabet size must be >= 1");
    require(static_cast<int>(mats_.size()) == d, "Point: expected d matrices");
    for (const auto& m : mats_) {
      require(m.rows() == mats_[0].rows() && m.cols() == mats_[0].cols(),
              "Point: components must share one shape");
      require(is_finite(m), "Point: non-finite entries");
    }
  }

  static Point zero(int d, Index rows, Index cols) {
    std::vector<Matrix> ms(d, Matrix::Zero(rows, cols));
    return Point(d, std::move(ms));
  }
  static Point zero(int d, Index n) { return zero(d, n, n); }

  // A scalar tuple c = (c_1 I_n, .., c_d I_n); central in the commutant sense.
  static Point central(const std::vector<Complex>& scalars, Index n) {
    std::vector<Matrix> ms;
    ms.reserve(scalars.size());
    for (const Complex& c : scalars) ms.push_back(c * Matrix::Identity(n, n));
    return Point(static_cast<int>(scalars.size()), std::move(ms));
  }

  // Standard basis direction e_i at level 1.
  static Point basis(int d, int i) {
    require(i >= 1 && i <= d, "Point::basis: letter out of range");
    std::vector<Matrix> ms(d, Matrix::Zero(1, 1));
    ms[i - 1](0, 0) = Complex(1.0, 0.0);
    return Point(d, std::move(ms));
  }

  int d() const { return static_cast<int>(mats_.size()); }
  Index rows() const { return mats_.empty() ? 0 : mats_[0].rows(); }
  Index cols() const { return mats_.empty() ? 0 : mats_[0].cols(); }
  bool square() const { return rows() == cols(); }
  Index level() const {
    require(square(), "Point: level defined for square tuples only");
    return rows();
  }

  const Matrix& operator[](int i) const { return mats_.at(i); }
  Matrix& operator[](int i) { return mats_.at(i); }
  const std::vector<Matrix>& mats() const { return mats_; }

  Point scaled(Complex t) const {
    std::vector<Matrix> ms(mats_);
    for (auto& m : ms) m *= t;
    return Point(d(), std::move(ms));
  }

  Point operator+(const Point& o) const {
    require(d() == o.d() && rows() == o.rows() && cols() == o.cols(),
            "Point: shape mismatch in sum");
    std::vector<Matrix> ms(mats_);
    for (int i = 0; i < d(); ++i) ms[i] += o.mats_[i];
    return Point(d(), std::move(ms));
  }
  Point operator-(const Point& o) const { return *this + o.scaled(-1.0); }

  // The row block [Z_1 Z_2 ... Z_d].
  Matrix row_block() const {
    Matrix r(rows(), cols() * d());
    for (int i = 0; i < d(); ++i)
      r.middleCols(i * cols(), cols()) = mats_[i];
    return r;
  }

 private:
  std::vector<Matrix> mats_;
};

// Largest singular value. Full SVD up to dimension 512, power iteration on
// A^H A above (tolerance 1e-13, at most 10000 sweeps).
inline double spectral_norm(const Matrix& a) {
  require(is_finite(a), "spectral_norm: non-finite entries");
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  if (a.rows() <= 512 && a.cols() <= 512) {
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
  }
  // Power iteration tracking sqrt of the top eigenvalue of A^H A.
  const Matrix& m = a;
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(m.cols());
  v.normalize();
  double prev = 0.0;
  for (int it = 0; it < 10000; ++it) {
    Eigen::VectorXcd w = m.adjoint() * (m * v);
    double lambda = w.norm();
    if (lambda == 0.0) return 0.0;
    v = w / lambda;
    double sigma = std::sqrt(lambda);
    if (std::abs(sigma - prev) <= 1e-13 * std::max(1.0, sigma)) return sigma;
    prev = sigma;
  }
  return prev;
}

inline double frobenius_norm(const Matrix& a) { return a.norm(); }

// ||sum Z_i Z_i*||^{1/2}, the operator norm of [Z_1 ... Z_d].
inline double row_norm(const Point& z) {
  return spectral_norm(z.row_block());
}

// Componentwise block-diagonal tuple at level n_z + n_w.
inline Point direct_sum(const Point& z, const Point& w) {
  require(z.d() == w.d(), "direct_sum: alphabet mismatch");
  std::vector<Matrix> ms;
  ms.reserve(z.d());
  for (int i = 0; i < z.d(); ++i) {
    Matrix m = Matrix::Zero(z.rows() + w.rows(), z.cols() + w.cols());
    m.topLeftCorner(z.rows(), z.cols()) = z[i];
    m.bottomRightCorner(w.rows(), w.cols()) = w[i];
    ms.push_back(std::move(m));
  }
  return Point(z.d(), std::move(ms));
}

// Componentwise [[Z_i, U_i], [0, W_i]]; u may be rectangular n_z x n_w.
inline Point upper_block(const Point& z, const Point& w, const Point& u) {
  require(z.d() == w.d() && z.d() == u.d(), "upper_block: alphabet mismatch");
  require(z.square() && w.square(), "upper_block: z and w must be square");
  require(u.rows() == z.rows() && u.cols() == w.cols(),
          "upper_block: direction shape mismatch");
  std::vector<Matrix> ms;
  ms.reserve(z.d());
  for (int i = 0; i < z.d(); ++i) {
    Matrix m = Matrix::Zero(z.rows() + w.rows(), z.rows() + w.rows());
    m.topLeftCorner(z.rows(), z.rows()) = z[i];
    m.topRightCorner(z.rows(), w.rows()) = u[i];
    m.bottomRightCorner(w.rows(), w.rows()) = w[i];
    ms.push_back(std::move(m));
  }
  return Point(z.d(), std::move(ms));
}

// Block bidiagonal tuple: zs on the diagonal, us on the first superdiagonal.
inline Point bidiagonal_block(const std::vector<Point>& zs,
                              const std::vector<Point>& us) {
  require(!zs.empty(), "bidiagonal_block: need at least one point");
  require(us.size() + 1 == zs.size(),
          "bidiagonal_block: need one direction fewer than points");
  const int d = zs[0].d();
  Index total = 0;
  for (const auto& z : zs) {
    require(z.d() == d, "bidiagonal_block: alphabet mismatch");
    require(z.square(), "bidiagonal_block: diagonal points must be square");
    total += z.rows();
  }
  for (size_t j = 0; j < us.size(); ++j) {
    require(us[j].d() == d, "bidiagonal_block: alphabet mismatch");
    require(us[j].rows() == zs[j].rows() && us[j].cols() == zs[j + 1].rows(),
            "bidiagonal_block: direction shape mismatch");
  }
  std::vector<Matrix> ms;
  ms.reserve(d);
  for (int i = 0; i < d; ++i) {
    Matrix m = Matrix::Zero(total, total);
    Index off = 0;
    for (size_t j = 0; j < zs.size(); ++j) {
      m.block(off, off, zs[j].rows(), zs[j].rows()) = zs[j][i];
      if (j + 1 < zs.size())
        m.block(off, off + zs[j].rows(), us[j].rows(), us[j].cols()) = us[j][i];
      off += zs[j].rows();
    }
    ms.push_back(std::move(m));
  }
  return Point(d, std::move(ms));
}

// Extract the (bi,bj) block of a matrix partitioned by the given level sizes.
inline Matrix block_of(const Matrix& a, const std::vector<Index>& sizes,
                       size_t bi, size_t bj) {
  Index r0 = 0, c0 = 0;
  for (size_t i = 0; i < bi; ++i) r0 += sizes[i];
  for (size_t j = 0; j < bj; ++j) c0 += sizes[j];
  return a.block(r0, c0, sizes[bi], sizes[bj]);
}

struct IntertwinerCertificate {
  Matrix C;
  Point source;  // level n
  Point target;  // level m
  double residual = 0.0;
  double tolerance = kDefaultTol;
  std::string provenance;

  bool valid() const { return residual <= tolerance; }
};

// residual = max_i ||C Z_i - W_i C||; C maps the source space into the target.
inline IntertwinerCertificate certify_intertwiner(const Matrix& C,
                                                  const Point& z,
                                                  const Point& w,
                                                  double tol = kDefaultTol,
                                                  std::string provenance = {}) {
  require(z.d() == w.d(), "certify_intertwiner: alphabet mismatch");
  require(z.square() && w.square(), "certify_intertwiner: points must be square");
  require(C.cols() == z.rows() && C.rows() == w.rows(),
          "certify_intertwiner: C must be m x n for levels n -> m");
  double res = 0.0;
  for (int i = 0; i < z.d(); ++i)
    res = std::max(res, spectral_norm(C * z[i] - w[i] * C));
  return IntertwinerCertificate{C, z, w, res, tol, std::move(provenance)};
}

// The compression (v Z_1 v*, .., v Z_d v*) by a contraction v.
inline Point compress(const Matrix& v, const Point& z) {
  require(z.square(), "compress: point must be square");
  require(v.cols() == z.rows(), "compress: shape mismatch");
  std::vector<Matrix> ms;
  ms.reserve(z.d());
  for (int i = 0; i < z.d(); ++i) ms.push_back(v * z[i] * v.adjoint());
  return Point(z.d(), std::move(ms));
}

// --- seeded sampling helpers ------------------------------------------------

using Rng = std::mt19937_64;

inline Complex random_complex(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double s = std::sqrt(0.5);
  return Complex(g(rng) * s, g(rng) * s);
}

inline Matrix random_matrix(Rng& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = random_complex(rng);
  return m;
}

inline Matrix random_unitary(Rng& rng, Index n) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, n, n));
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i) {
    Complex di = r(i, i);
    double a = std::abs(di);
    q.col(i) *= (a == 0.0) ? Complex(1, 0) : di / a;
  }
  return q;
}

// Invertible with singular values in [1/sqrt(cond), sqrt(cond)].
inline Matrix random_well_conditioned(Rng& rng, Index n, double cond = 10.0) {
  Matrix u = random_unitary(rng, n);
  Matrix v = random_unitary(rng, n);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double lo = 1.0 / std::sqrt(cond), hi = std::sqrt(cond);
  Eigen::VectorXd sv(n);
  for (Index i = 0; i < n; ++i) sv(i) = lo + (hi - lo) * uni(rng);
  return u * sv.asDiagonal() * v.adjoint();
}

inline Point random_point(Rng& rng, int d, Index n) {
  std::vector<Matrix> ms;
  ms.reserve(d);
  for (int i = 0; i < d; ++i) ms.push_back(random_matrix(rng, n, n));
  return Point(d, std::move(ms));
}

// Random square tuple rescaled to the requested row norm.
inline Point random_point_with_norm(Rng& rng, int d, Index n, double target) {
  Point z = random_point(rng, d, n);
  double r = row_norm(z);
  if (r == 0.0) return z;
  return z.scaled(target / r);
}

// Random coisometry v (v v* = I_m), m <= n.
inline Matrix random_coisometry(Rng& rng, Index m, Index n) {
  require(m <= n, "random_coisometry: need m <= n");
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, n, m));
  Matrix q = Matrix(qr.householderQ()).leftCols(m);
  return q.adjoint();
}

}  // namespace ncfree
