#pragma once

// Formal series in d free variables with complex word coefficients:
// arithmetic, degree norms, radius of convergence, evaluation at matrix
// tuples, generalized powers and directional derivatives.

#include "ncfree/nc_core.hpp"

#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>

namespace ncfree {

constexpr std::int64_t kWordCap = 1000000;  // entries; override per call

struct RadiusEstimate {
  double value = std::numeric_limits<double>::infinity();
  int degrees_used = 0;
  bool exact = false;
};

// Pattern tags for series whose coefficients extend past the stored window.
enum class GeneratorKind { Geometric, Full, Luminet };

struct Generator {
  GeneratorKind kind;
  int param = 0;  // Luminet outer index bound; unused otherwise
};

class FreeSeries {
 public:
  using CoeffMap = std::map<Word, Complex, WordGradedLess>;

  explicit FreeSeries(int d) : d_(d) {
    require(d >= 1, "FreeSeries: alphabet size must be >= 1");
  }

  static FreeSeries polynomial(
      int d, const std::vector<std::pair<Word, Complex>>& terms) {
    FreeSeries s(d);
    for (const auto& [w, c] : terms) s.add(w, c);
    return s;
  }

  // a_{1^k} = 1 for every k; radius exactly 1.
  static FreeSeries geometric() {
    FreeSeries s(1);
    s.generator_ = Generator{GeneratorKind::Geometric, 0};
    s.materialized_degree_ = -1;
    s.ensure_degree(16);
    return s;
  }

  // a_w = 1 for every word; radius exactly d^{-1/2}.
  static FreeSeries full(int d) {
    FreeSeries s(d);
    s.generator_ = Generator{GeneratorKind::Full, 0};
    s.materialized_degree_ = -1;
    s.ensure_degree(4);
    return s;
  }

  // Sum over 2 <= k <= k_max of the standard identity S_k applied to the
  // variables X1, X1 X2, .., X1 X2^{k-1}, expanded into signed words over
  // d = 2.  Every coefficient is an integer of modulus 1.
  static FreeSeries luminet(int k_max) {
    require(k_max >= 2 && k_max <= 8, "luminet: need 2 <= k_max <= 8");
    FreeSeries s(2);
    s.generator_ = Generator{GeneratorKind::Luminet, k_max};
    for (int k = 2; k <= k_max; ++k) {
      std::vector<int> perm(k);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        int inversions = 0;
        for (int a = 0; a < k; ++a)
          for (int b = a + 1; b < k; ++b)
            if (perm[a] > perm[b]) ++inversions;
        const double sign = (inversions % 2 == 0) ? 1.0 : -1.0;
        Word w;
        for (int slot = 0; slot < k; ++slot) {
          // Variable j is the word (1, 2, 2, .., 2) with j twos.
          w.letters.push_back(1);
          for (int t = 0; t < perm[slot]; ++t) w.letters.push_back(2);
        }
        s.add(w, Complex(sign, 0.0));
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    s.materialized_degree_ = s.max_degree();
    return s;
  }

  int d() const { return d_; }
  const CoeffMap& coeffs() const { return coeffs_; }
  const std::optional<Generator>& generator() const { return generator_; }

  void add(const Word& w, Complex c) {
    require(w.valid_for(d_), "FreeSeries: word letter out of [1,d]");
    if (c == Complex(0.0, 0.0)) return;
    auto [it, inserted] = coeffs_.emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Complex(0.0, 0.0)) coeffs_.erase(it);
    }
  }

  Complex coeff(const Word& w) const {
    auto it = coeffs_.find(w);
    return it == coeffs_.end() ? Complex(0.0, 0.0) : it->second;
  }

  int max_degree() const {
    return coeffs_.empty() ? 0 : coeffs_.rbegin()->first.degree();
  }
  bool finitely_supported() const { return !generator_.has_value(); }

  // Materialize generator-defined coefficients up to the given degree.
  void ensure_degree(int k, std::int64_t cap = kWordCap) const {
    if (!generator_ || materialized_degree_ >= k) return;
    switch (generator_->kind) {
      case GeneratorKind::Geometric:
        for (int j = std::max(0, materialized_degree_ + 1); j <= k; ++j)
          coeffs_.emplace(Word(std::vector<int>(j, 1)), Complex(1.0, 0.0));
        materialized_degree_ = k;
        break;
      case GeneratorKind::Full: {
        std::int64_t count = 0;
        for (int j = 0; j <= k; ++j) {
          std::int64_t words = 1;
          for (int t = 0; t < j; ++t) words *= d_;
          count += words;
        }
        require(count <= cap, "FreeSeries: word cap exceeded");
        std::vector<Word> level{Word{}};
        coeffs_.emplace(Word{}, Complex(1.0, 0.0));
        for (int j = 1; j <= k; ++j) {
          std::vector<Word> next;
          next.reserve(level.size() * d_);
          for (const Word& w : level)
            for (int l = 1; l <= d_; ++l) {
              Word e = w;
              e.letters.push_back(l);
              coeffs_.emplace(e, Complex(1.0, 0.0));
              next.push_back(std::move(e));
            }
          level = std::move(next);
        }
        materialized_degree_ = k;
        break;
      }
      case GeneratorKind::Luminet:
        break;  // fully materialized at construction
    }
  }

  // l2 norm of the degree-k coefficient slice.
  double degree_norm(int k) const {
    require(k >= 0, "degree_norm: k must be >= 0");
    if (generator_) {
      switch (generator_->kind) {
        case GeneratorKind::Geometric:
          return 1.0;
        case GeneratorKind::Full:
          return std::pow(static_cast<double>(d_), 0.5 * k);
        case GeneratorKind::Luminet:
          break;  // stored window is the object
      }
    }
    double s2 = 0.0;
    Word lo(std::vector<int>(k, 1));
    for (auto it = coeffs_.lower_bound(lo);
         it != coeffs_.end() && it->first.degree() == k; ++it)
      s2 += std::norm(it->second);
    return std::sqrt(s2);
  }

  double operator_norm_bound(double rho, int k) const {
    return degree_norm(k) * std::pow(rho, k);
  }

 private:
  int d_;
  mutable CoeffMap coeffs_;
  std::optional<Generator> generator_;
  mutable int materialized_degree_ = std::numeric_limits<int>::max();

  friend FreeSeries multiply(const FreeSeries&, const FreeSeries&, int);
};

// Radius of convergence. Pattern series carry exact closed forms for the
// limsup; a finitely supported series is entire. degrees_used records how
// many degrees entered the estimate.
inline RadiusEstimate radius(const FreeSeries& s, int k_max) {
  require(k_max >= 1, "radius: k_max must be >= 1");
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (s.generator()) {
    switch (s.generator()->kind) {
      case GeneratorKind::Geometric:
        return {1.0, k_max, true};
      case GeneratorKind::Full:
        return {1.0 / std::sqrt(static_cast<double>(s.d())), k_max, true};
      case GeneratorKind::Luminet:
        // Infinitely many unit coefficients on words of length m(m+1)/2 with
        // multiplicity m!, hence limsup ||theta_m||^(1/m) = 1 exactly.
        return {1.0, k_max, true};
    }
  }
  return {inf, std::min(k_max, s.max_degree()), true};
}

// Finite-data proxy (max over computed degrees of ||theta_k||^(1/k))^{-1}.
// Conservative stand-in for the limsup when only a coefficient window is
// trusted.
inline RadiusEstimate radius_proxy(const FreeSeries& s, int k_max) {
  require(k_max >= 1, "radius_proxy: k_max must be >= 1");
  double m = 0.0;
  int used = 0;
  for (int k = 1; k <= k_max; ++k) {
    double nk = s.degree_norm(k);
    if (nk > 0.0) {
      m = std::max(m, std::pow(nk, 1.0 / k));
      ++used;
    }
  }
  if (m == 0.0) return {std::numeric_limits<double>::infinity(), used, false};
  return {1.0 / m, used, false};
}

// Word-concatenation convolution c_w = sum_{w=uv} a_u b_v.  Pattern-tagged
// inputs need an explicit truncation degree.
inline FreeSeries multiply(const FreeSeries& a, const FreeSeries& b,
                           int truncate_degree = -1) {
  require(a.d() == b.d(), "multiply: alphabet mismatch");
  if (truncate_degree < 0)
    require(a.finitely_supported() && b.finitely_supported(),
            "multiply: pattern series need a truncation degree");
  else {
    a.ensure_degree(truncate_degree);
    b.ensure_degree(truncate_degree);
  }
  FreeSeries out(a.d());
  for (const auto& [u, cu] : a.coeffs()) {
    if (truncate_degree >= 0 && u.degree() > truncate_degree) continue;
    for (const auto& [v, cv] : b.coeffs()) {
      if (truncate_degree >= 0 && u.degree() + v.degree() > truncate_degree)
        continue;
      out.add(u.concat(v), cu * cv);
    }
  }
  return out;
}

namespace detail {

// Depth-first accumulation over lexicographically sorted words, reusing the
// shared-prefix product stack (one matrix multiply per pushed letter).
template <typename Visit>
void fold_words(const std::vector<std::pair<Word, Complex>>& words,
                const Point& z, Visit&& visit) {
  const Index n = z.level();
  std::vector<Matrix> stack;  // stack[j] = product of first j letters
  stack.emplace_back(Matrix::Identity(n, n));
  std::vector<int> current;  // letters matching the stack
  for (const auto& [w, c] : words) {
    size_t keep = 0;
    while (keep < current.size() && keep < w.letters.size() &&
           current[keep] == w.letters[keep])
      ++keep;
    current.resize(keep);
    stack.resize(keep + 1);
    for (size_t j = keep; j < w.letters.size(); ++j) {
      current.push_back(w.letters[j]);
      stack.push_back(stack.back() * z[w.letters[j] - 1]);
    }
    visit(w, c, stack.back());
  }
}

inline std::vector<std::pair<Word, Complex>> sorted_window(
    const FreeSeries& s, int k_lo, int k_hi) {
  std::vector<std::pair<Word, Complex>> words;
  for (const auto& [w, c] : s.coeffs())
    if (w.degree() >= k_lo && w.degree() <= k_hi) words.emplace_back(w, c);
  std::sort(words.begin(), words.end(),
            [](const auto& a, const auto& b) {
              return a.first.letters < b.first.letters;
            });
  return words;
}

}  // namespace detail

struct EvalResult {
  Matrix value;
  double tail_bound = 0.0;
  bool divergence_warning = false;
};

// Partial sum over degrees <= k_max of sum_{|w|=k} a_w Z_w, with a geometric
// bound on the omitted tail.  Outside the convergence radius the partial sum
// is still returned, flagged as divergent.
inline EvalResult eval(const FreeSeries& s, const Point& z, int k_max,
                       std::int64_t cap = kWordCap) {
  require(s.d() == z.d(), "eval: alphabet mismatch between series and point");
  require(z.square(), "eval: point must be square");
  require(k_max >= 0, "eval: k_max must be >= 0");
  s.ensure_degree(k_max, cap);
  const Index n = z.level();

  Matrix acc = Matrix::Zero(n, n);
  auto words = detail::sorted_window(s, 0, k_max);
  detail::fold_words(words, z,
                     [&acc](const Word&, Complex c, const Matrix& prod) {
                       acc += c * prod;
                     });

  EvalResult out{std::move(acc), 0.0, false};
  const double rho = row_norm(z);
  if (s.finitely_supported() ||
      (s.generator() && s.generator()->kind == GeneratorKind::Luminet)) {
    // Finite support: remaining stored degrees give the exact bound.
    for (int k = k_max + 1; k <= s.max_degree(); ++k)
      out.tail_bound += s.operator_norm_bound(rho, k);
    return out;
  }
  const double R = radius(s, std::max(1, k_max)).value;
  if (rho >= R) {
    out.tail_bound = std::numeric_limits<double>::infinity();
    out.divergence_warning = true;
    return out;
  }
  // ||theta_k|| rho^k is geometric for both tagged patterns.
  const double base =
      s.generator()->kind == GeneratorKind::Geometric
          ? rho
          : rho * std::sqrt(static_cast<double>(s.d()));
  out.tail_bound = std::pow(base, k_max + 1) / (1.0 - base);
  return out;
}

// The degree-k slice sum_{|w|=k} a_w Z_w alone.
inline Matrix eval_degree(const FreeSeries& s, const Point& z, int k,
                          std::int64_t cap = kWordCap) {
  require(s.d() == z.d(), "eval_degree: alphabet mismatch");
  require(z.square(), "eval_degree: point must be square");
  s.ensure_degree(k, cap);
  const Index n = z.level();
  Matrix acc = Matrix::Zero(n, n);
  auto words = detail::sorted_window(s, k, k);
  detail::fold_words(words, z,
                     [&acc](const Word&, Complex c, const Matrix& prod) {
                       acc += c * prod;
                     });
  return acc;
}

// All d^k products Z_w with |w| = k in lexicographic order; [I] for k = 0.
inline std::vector<Matrix> gen_power(const Point& z, int k,
                                     std::int64_t cap = kWordCap) {
  require(k >= 0, "gen_power: k must be >= 0");
  require(z.square(), "gen_power: point must be square");
  const Index n = z.level();
  std::int64_t count = 1;
  for (int t = 0; t < k; ++t) {
    count *= z.d();
    if (count > cap) throw std::length_error("gen_power: entry cap exceeded");
  }
  std::vector<Matrix> level{Matrix::Identity(n, n)};
  for (int j = 0; j < k; ++j) {
    std::vector<Matrix> next;
    next.reserve(level.size() * z.d());
    for (const Matrix& p : level)
      for (int i = 0; i < z.d(); ++i) next.push_back(p * z[i]);
    level = std::move(next);
  }
  return level;
}

// sum_{|w|<=k_max} a_w sum_p Z_{i_1}..zeta_{i_p}..Z_{i_k}: the derivative of
// the evaluation in the direction zeta.
inline Matrix directional_derivative(const FreeSeries& s, const Point& z,
                                     const Point& zeta, int k_max) {
  require(s.d() == z.d() && s.d() == zeta.d(),
          "directional_derivative: alphabet mismatch");
  require(z.square() && zeta.rows() == z.rows() && zeta.cols() == z.cols(),
          "directional_derivative: shape mismatch");
  s.ensure_degree(k_max);
  const Index n = z.level();
  Matrix acc = Matrix::Zero(n, n);
  for (const auto& [w, c] : s.coeffs()) {
    const int k = w.degree();
    if (k == 0 || k > k_max) continue;
    std::vector<Matrix> prefix(k + 1), suffix(k + 1);
    prefix[0] = Matrix::Identity(n, n);
    for (int j = 0; j < k; ++j) prefix[j + 1] = prefix[j] * z[w.letters[j] - 1];
    suffix[k] = Matrix::Identity(n, n);
    for (int j = k - 1; j >= 0; --j)
      suffix[j] = z[w.letters[j] - 1] * suffix[j + 1];
    for (int p = 0; p < k; ++p)
      acc += c * (prefix[p] * zeta[w.letters[p] - 1] * suffix[p + 1]);
  }
  return acc;
}

}  // namespace ncfree
