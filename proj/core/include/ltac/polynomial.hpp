#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ltac {

/// Error type for all polynomial-layer contract violations (dimension
/// mismatches, malformed text input, invalid shapes).
class PolyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A power product of the variables. Exponent vector length equals the
/// number of variables of the enclosing polynomial.
struct Monomial {
  std::vector<unsigned> exponents;

  Monomial() = default;
  explicit Monomial(std::vector<unsigned> e) : exponents(std::move(e)) {}
  static Monomial unit(std::size_t nvars) {
    return Monomial(std::vector<unsigned>(nvars, 0u));
  }

  std::size_t nvars() const { return exponents.size(); }
  unsigned degree() const {
    unsigned d = 0;
    for (unsigned e : exponents) d += e;
    return d;
  }
  /// Total degree restricted to the trailing `count` variables.
  unsigned degree_tail(std::size_t count) const;

  Monomial operator*(const Monomial& other) const;
  bool operator==(const Monomial& other) const = default;
};

/// Graded lexicographic order: total degree first, then lexicographic on
/// the exponent vector. This is the canonical term order everywhere;
/// deterministic iteration order is what makes compiler output and file
/// formats reproducible.
struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Names the variable split used by the textual syntax: the first `nx`
/// variables print as x1..xn, the trailing `nz` as z1..zm (Schur
/// auxiliaries).
struct VarLayout {
  int nx = 0;
  int nz = 0;
  int total() const { return nx + nz; }
};

/// Sparse multivariate polynomial with real coefficients over a fixed
/// number of variables. Zero coefficients are never stored; terms are kept
/// in graded-lex order. Values are immutable after construction and safe
/// to share across threads.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, double, GrlexLess>;

  Polynomial() : nvars_(0) {}
  explicit Polynomial(int nvars);

  static Polynomial constant(int nvars, double value);
  static Polynomial variable(int nvars, int index);
  /// Single-term constructor; drops the term if `coeff == 0`.
  static Polynomial term(Monomial m, double coeff);

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Coefficient of the constant monomial (0 if absent).
  double constant_term() const;
  unsigned degree() const;

  const TermMap& terms() const { return terms_; }
  double coeff(const Monomial& m) const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator-() const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator*(double scale) const;

  Polynomial derivative(int var) const;
  double evaluate(std::span<const double> point) const;

  bool operator==(const Polynomial& other) const = default;

  /// Maximum absolute coefficient difference; both arguments must share
  /// nvars. Used by certificate validation and tests.
  static double coeff_distance(const Polynomial& a, const Polynomial& b);

  /// Internal builder used by arithmetic and the parser: accumulates into
  /// a term, pruning exact zeros.
  void add_term(const Monomial& m, double coeff);

 private:
  int nvars_;
  TermMap terms_;

  void check_same_vars(const Polynomial& other) const;
};

inline Polynomial operator*(double scale, const Polynomial& p) { return p * scale; }

/// Vector of polynomials sharing one variable space.
class PolyVector {
 public:
  PolyVector() = default;
  PolyVector(int nvars, int size);
  explicit PolyVector(std::vector<Polynomial> entries);

  int nvars() const { return nvars_; }
  int size() const { return static_cast<int>(entries_.size()); }
  const Polynomial& operator[](int i) const { return entries_.at(i); }
  Polynomial& operator[](int i) { return entries_.at(i); }
  const std::vector<Polynomial>& entries() const { return entries_; }

  bool is_zero() const;
  std::vector<double> evaluate(std::span<const double> point) const;

  bool operator==(const PolyVector& other) const = default;

 private:
  int nvars_ = 0;
  std::vector<Polynomial> entries_;
};

/// Dense matrix of polynomials sharing one variable space.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(int nvars, int rows, int cols);

  int nvars() const { return nvars_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const Polynomial& operator()(int r, int c) const { return entries_.at(index(r, c)); }
  Polynomial& operator()(int r, int c) { return entries_.at(index(r, c)); }

  bool is_zero() const;
  bool is_symmetric() const;
  /// True if every off-diagonal entry is identically zero.
  bool is_diagonal() const;
  bool is_constant() const;

  PolyVector apply(const PolyVector& v) const;

  bool operator==(const PolyMatrix& other) const = default;

 private:
  int nvars_ = 0;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Polynomial> entries_;

  std::size_t index(int r, int c) const;
};

/// Gradient with respect to every variable, as a PolyVector of length nvars.
PolyVector gradient(const Polynomial& p);

/// Dot product of two polynomial vectors of equal length.
Polynomial dot(const PolyVector& a, const PolyVector& b);

/// Parses the textual polynomial syntax, e.g. "3.5*x1^2*x2 - x3 + 1".
/// Variables are x1..x<nx> and z1..z<nz>; z variables map to the trailing
/// indices. Throws PolyError with a character position on bad input.
Polynomial parse_polynomial(const std::string& text, const VarLayout& layout);
inline Polynomial parse_polynomial(const std::string& text, int nx) {
  return parse_polynomial(text, VarLayout{nx, 0});
}

/// Canonical textual form: terms in descending graded-lex order, shortest
/// round-trip coefficient formatting. parse(to_string(p)) == p exactly.
std::string to_string(const Polynomial& p, const VarLayout& layout);
inline std::string to_string(const Polynomial& p) {
  return to_string(p, VarLayout{p.nvars(), 0});
}

/// Shortest decimal form of `v` that parses back to the same double.
std::string format_double(double v);

}  // namespace ltac
