#include "ltac/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ltac {

unsigned Monomial::degree_tail(std::size_t count) const {
  unsigned d = 0;
  std::size_t n = exponents.size();
  for (std::size_t i = n - std::min(count, n); i < n; ++i) d += exponents[i];
  return d;
}

Monomial Monomial::operator*(const Monomial& other) const {
  if (exponents.size() != other.exponents.size())
    throw PolyError("monomial product: variable count mismatch");
  Monomial out = *this;
  for (std::size_t i = 0; i < exponents.size(); ++i) out.exponents[i] += other.exponents[i];
  return out;
}

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
  unsigned da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  return a.exponents < b.exponents;
}

Polynomial::Polynomial(int nvars) : nvars_(nvars) {
  if (nvars < 0) throw PolyError("negative variable count");
}

Polynomial Polynomial::constant(int nvars, double value) {
  Polynomial p(nvars);
  p.add_term(Monomial::unit(nvars), value);
  return p;
}

Polynomial Polynomial::variable(int nvars, int index) {
  if (index < 0 || index >= nvars) throw PolyError("variable index out of range");
  Monomial m = Monomial::unit(nvars);
  m.exponents[index] = 1;
  return term(std::move(m), 1.0);
}

Polynomial Polynomial::term(Monomial m, double coeff) {
  Polynomial p(static_cast<int>(m.nvars()));
  p.add_term(m, coeff);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.degree() == 0);
}

double Polynomial::constant_term() const {
  auto it = terms_.find(Monomial::unit(nvars_));
  return it == terms_.end() ? 0.0 : it->second;
}

unsigned Polynomial::degree() const {
  if (terms_.empty()) return 0;
  return terms_.rbegin()->first.degree();
}

double Polynomial::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const Monomial& m, double coeff) {
  if (static_cast<int>(m.nvars()) != nvars_)
    throw PolyError("term has wrong variable count");
  if (coeff == 0.0) return;
  auto [it, inserted] = terms_.emplace(m, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

void Polynomial::check_same_vars(const Polynomial& other) const {
  if (nvars_ != other.nvars_) throw PolyError("polynomial variable count mismatch");
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  check_same_vars(other);
  Polynomial out = *this;
  for (const auto& [m, c] : other.terms_) out.add_term(m, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  check_same_vars(other);
  Polynomial out = *this;
  for (const auto& [m, c] : other.terms_) out.add_term(m, -c);
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  check_same_vars(other);
  Polynomial out(nvars_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : other.terms_) out.add_term(ma * mb, ca * cb);
  return out;
}

Polynomial Polynomial::operator*(double scale) const {
  Polynomial out(nvars_);
  if (scale == 0.0) return out;
  for (const auto& [m, c] : terms_) out.add_term(m, c * scale);
  return out;
}

Polynomial Polynomial::derivative(int var) const {
  if (var < 0 || var >= nvars_) throw PolyError("derivative variable out of range");
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_) {
    unsigned e = m.exponents[var];
    if (e == 0) continue;
    Monomial d = m;
    d.exponents[var] = e - 1;
    out.add_term(d, c * static_cast<double>(e));
  }
  return out;
}

namespace {
double ipow(double base, unsigned e) {
  double r = 1.0;
  while (e != 0) {
    if (e & 1u) r *= base;
    base *= base;
    e >>= 1u;
  }
  return r;
}
}  // namespace

double Polynomial::evaluate(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != nvars_)
    throw PolyError("evaluate: point dimension mismatch");
  double sum = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c;
    for (int i = 0; i < nvars_; ++i)
      if (m.exponents[i] != 0) t *= ipow(point[i], m.exponents[i]);
    sum += t;
  }
  return sum;
}

double Polynomial::coeff_distance(const Polynomial& a, const Polynomial& b) {
  a.check_same_vars(b);
  double d = 0.0;
  auto ia = a.terms_.begin();
  auto ib = b.terms_.begin();
  GrlexLess less;
  while (ia != a.terms_.end() || ib != b.terms_.end()) {
    if (ib == b.terms_.end() || (ia != a.terms_.end() && less(ia->first, ib->first))) {
      d = std::max(d, std::abs(ia->second));
      ++ia;
    } else if (ia == a.terms_.end() || less(ib->first, ia->first)) {
      d = std::max(d, std::abs(ib->second));
      ++ib;
    } else {
      d = std::max(d, std::abs(ia->second - ib->second));
      ++ia;
      ++ib;
    }
  }
  return d;
}

PolyVector::PolyVector(int nvars, int size) : nvars_(nvars) {
  entries_.assign(size, Polynomial(nvars));
}

PolyVector::PolyVector(std::vector<Polynomial> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw PolyError("PolyVector: empty entry list");
  nvars_ = entries_.front().nvars();
  for (const auto& p : entries_)
    if (p.nvars() != nvars_) throw PolyError("PolyVector: mixed variable counts");
}

bool PolyVector::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const Polynomial& p) { return p.is_zero(); });
}

std::vector<double> PolyVector::evaluate(std::span<const double> point) const {
  std::vector<double> out(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) out[i] = entries_[i].evaluate(point);
  return out;
}

PolyMatrix::PolyMatrix(int nvars, int rows, int cols) : nvars_(nvars), rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw PolyError("PolyMatrix: negative shape");
  entries_.assign(static_cast<std::size_t>(rows) * cols, Polynomial(nvars));
}

std::size_t PolyMatrix::index(int r, int c) const {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw PolyError("PolyMatrix: index out of range");
  return static_cast<std::size_t>(r) * cols_ + c;
}

bool PolyMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const Polynomial& p) { return p.is_zero(); });
}

bool PolyMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (int r = 0; r < rows_; ++r)
    for (int c = r + 1; c < cols_; ++c)
      if (!((*this)(r, c) == (*this)(c, r))) return false;
  return true;
}

bool PolyMatrix::is_diagonal() const {
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c)
      if (r != c && !(*this)(r, c).is_zero()) return false;
  return true;
}

bool PolyMatrix::is_constant() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const Polynomial& p) { return p.is_constant(); });
}

PolyVector PolyMatrix::apply(const PolyVector& v) const {
  if (v.size() != cols_) throw PolyError("PolyMatrix::apply: shape mismatch");
  PolyVector out(nvars_, rows_);
  for (int r = 0; r < rows_; ++r) {
    Polynomial acc(nvars_);
    for (int c = 0; c < cols_; ++c) acc = acc + (*this)(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

PolyVector gradient(const Polynomial& p) {
  PolyVector out(p.nvars(), p.nvars());
  for (int i = 0; i < p.nvars(); ++i) out[i] = p.derivative(i);
  return out;
}

Polynomial dot(const PolyVector& a, const PolyVector& b) {
  if (a.size() != b.size() || a.nvars() != b.nvars())
    throw PolyError("dot: shape mismatch");
  Polynomial acc(a.nvars());
  for (int i = 0; i < a.size(); ++i) acc = acc + a[i] * b[i];
  return acc;
}

// ---------------------------------------------------------------------------
// Textual syntax

namespace {

struct Parser {
  const std::string& s;
  const VarLayout& layout;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw PolyError("polynomial syntax error at position " + std::to_string(pos) + ": " + msg);
  }

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool peek(char c) {
    skip_ws();
    return pos < s.size() && s[pos] == c;
  }

  bool consume(char c) {
    if (peek(c)) {
      ++pos;
      return true;
    }
    return false;
  }

  Polynomial parse_expr() {
    Polynomial acc = parse_term();
    while (true) {
      if (consume('+')) {
        acc = acc + parse_term();
      } else if (consume('-')) {
        acc = acc - parse_term();
      } else {
        return acc;
      }
    }
  }

  Polynomial parse_term() {
    Polynomial acc = parse_factor();
    while (consume('*')) acc = acc * parse_factor();
    return acc;
  }

  Polynomial parse_factor() {
    Polynomial base = parse_primary();
    if (consume('^')) {
      unsigned e = parse_uint();
      Polynomial out = Polynomial::constant(layout.total(), 1.0);
      for (unsigned i = 0; i < e; ++i) out = out * base;
      return out;
    }
    return base;
  }

  unsigned parse_uint() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail("expected integer exponent");
    return static_cast<unsigned>(std::stoul(s.substr(start, pos - start)));
  }

  Polynomial parse_primary() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input");
    char c = s[pos];
    if (c == '(') {
      ++pos;
      Polynomial inner = parse_expr();
      if (!consume(')')) fail("expected ')'");
      return inner;
    }
    if (c == '-') {
      ++pos;
      return -parse_factor();
    }
    if (c == '+') {
      ++pos;
      return parse_factor();
    }
    if (c == 'x' || c == 'z') {
      ++pos;
      std::size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (pos == start) fail("expected variable index");
      int idx = std::stoi(s.substr(start, pos - start));
      int limit = (c == 'x') ? layout.nx : layout.nz;
      if (idx < 1 || idx > limit)
        fail(std::string(1, c) + std::to_string(idx) + " out of range");
      int var = (c == 'x') ? idx - 1 : layout.nx + idx - 1;
      return Polynomial::variable(layout.total(), var);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos;
      while (pos < s.size() &&
             (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' ||
              s[pos] == 'e' || s[pos] == 'E' ||
              ((s[pos] == '+' || s[pos] == '-') && pos > start &&
               (s[pos - 1] == 'e' || s[pos - 1] == 'E'))))
        ++pos;
      double v = 0.0;
      auto res = std::from_chars(s.data() + start, s.data() + pos, v);
      if (res.ec != std::errc() || res.ptr != s.data() + pos) fail("bad number");
      return Polynomial::constant(layout.total(), v);
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, const VarLayout& layout) {
  Parser p{text, layout};
  Polynomial out = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {
std::string monomial_text(const Monomial& m, const VarLayout& layout) {
  std::string out;
  for (int i = 0; i < layout.total(); ++i) {
    unsigned e = m.exponents[i];
    if (e == 0) continue;
    if (!out.empty()) out += "*";
    if (i < layout.nx)
      out += "x" + std::to_string(i + 1);
    else
      out += "z" + std::to_string(i - layout.nx + 1);
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out;
}
}  // namespace

std::string to_string(const Polynomial& p, const VarLayout& layout) {
  if (layout.total() != p.nvars()) throw PolyError("to_string: layout mismatch");
  if (p.is_zero()) return "0";
  std::string out;
  // Descending graded-lex so leading terms print first.
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    double c = it->second;
    bool first = out.empty();
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += (c < 0) ? " - " : " + ";
    }
    double a = std::abs(c);
    std::string mono = monomial_text(it->first, layout);
    if (mono.empty()) {
      out += format_double(a);
    } else if (a == 1.0) {
      out += mono;
    } else {
      out += format_double(a) + "*" + mono;
    }
  }
  return out;
}

}  // namespace ltac
