#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ltac/polynomial.hpp"

namespace ltac {

class SosError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Parity { all, even };
enum class DecisionKind { free_poly, sos_poly };
enum class VarScope { x_only, full };

/// All monomials of total degree <= max_deg over nvars variables in graded
/// lexicographic order, optionally restricted to even total degree.
/// Unfiltered count is C(nvars + max_deg, max_deg).
std::vector<Monomial> monomial_basis(int nvars, int max_deg, Parity parity = Parity::all);

/// Polynomial whose coefficients are affine in a program's scalar unknowns:
/// constant part plus one multiplier polynomial per referenced unknown.
/// Products of two unknown-bearing expressions are rejected; that keeps
/// every constraint affine by construction.
class AffinePoly {
 public:
  AffinePoly() = default;
  explicit AffinePoly(int nvars) : constant_(nvars) {}
  /*implicit*/ AffinePoly(Polynomial known) : constant_(std::move(known)) {}

  static AffinePoly unknown_term(int unknown, Polynomial multiplier);

  int nvars() const { return constant_.nvars(); }
  const Polynomial& constant() const { return constant_; }
  const std::map<int, Polynomial>& linear() const { return linear_; }
  bool is_known() const { return linear_.empty(); }

  AffinePoly operator+(const AffinePoly& other) const;
  AffinePoly operator-(const AffinePoly& other) const;
  AffinePoly operator-() const;
  AffinePoly operator*(const AffinePoly& other) const;  // at most one side unknown
  AffinePoly operator*(double s) const;
  AffinePoly derivative(int var) const;

  /// Numeric instantiation at the given unknown vector.
  Polynomial substitute(std::span<const double> unknown_values) const;

  /// Union of monomials that can appear for any unknown values.
  std::vector<Monomial> support() const;
  unsigned max_degree() const;

 private:
  Polynomial constant_;
  std::map<int, Polynomial> linear_;
};

inline AffinePoly operator*(const Polynomial& p, const AffinePoly& a) {
  return a * AffinePoly(p);
}

struct DecisionPoly {
  std::string name;
  int degree = 0;
  Parity parity = Parity::all;
  DecisionKind kind = DecisionKind::free_poly;
  bool include_constant = true;
  VarScope scope = VarScope::x_only;

  // Filled in at registration.
  std::vector<Monomial> basis;  // over the program's full variable space
  int first_unknown = -1;
};

struct SosConstraint {
  enum class Kind { sos, zero };
  AffinePoly expr;
  Kind kind = Kind::sos;
  Parity basis_parity = Parity::all;
  std::string label;
};

/// An SOS optimization program: a linear objective over scalar unknowns and
/// decision-polynomial coefficients, subject to "expression is SOS" and
/// "expression = 0" constraints, each expression affine in the unknowns.
/// The trailing nz variables are Schur auxiliaries (z1..znz in text form).
class SosProgram {
 public:
  explicit SosProgram(int nx, int nz = 0);

  int nx() const { return layout_.nx; }
  int nz() const { return layout_.nz; }
  int nvars() const { return layout_.total(); }
  const VarLayout& layout() const { return layout_; }

  int add_scalar(const std::string& name);
  /// Registers a decision polynomial and enumerates its coefficient
  /// unknowns over the admitted monomial basis. Returns a handle.
  int add_decision(DecisionPoly spec);

  const std::vector<DecisionPoly>& decisions() const { return decisions_; }
  const DecisionPoly& decision(int handle) const { return decisions_.at(handle); }
  const std::vector<std::string>& scalar_names() const { return scalar_names_; }
  int scalar_unknown(int scalar_handle) const { return scalar_handle; }

  AffinePoly scalar_expr(int scalar_handle) const;
  AffinePoly decision_expr(int decision_handle) const;
  std::vector<AffinePoly> decision_gradient(int decision_handle) const;

  void add_sos(AffinePoly expr, std::string label, Parity basis_parity = Parity::all);
  void add_zero(AffinePoly expr, std::string label);
  /// Linear objective over unknowns, always minimized.
  void minimize(std::vector<std::pair<int, double>> weights);

  const std::vector<SosConstraint>& constraints() const { return constraints_; }
  const std::vector<std::pair<int, double>>& objective() const { return objective_; }
  int num_unknowns() const { return num_unknowns_; }
  std::string unknown_name(int unknown) const;

 private:
  VarLayout layout_;
  std::vector<std::string> scalar_names_;
  std::vector<DecisionPoly> decisions_;
  std::vector<SosConstraint> constraints_;
  std::vector<std::pair<int, double>> objective_;
  int num_unknowns_ = 0;
};

/// Lemma-1 set-inclusion certificate: adds the constraint
///
///   f0 + sum_i S0_i h_i - sum_j S_j f_j  is SOS
///
/// where the S0 handles are free multipliers paired with the equality
/// cut-outs h, and the S handles are SOS multipliers paired with the
/// inequality cut-outs f. Rejects programs whose combined expression has
/// odd top degree. Returns the emitted constraint expression.
AffinePoly s_procedure(SosProgram& prog, const AffinePoly& f0,
                       std::span<const Polynomial> h, std::span<const Polynomial> f,
                       std::span<const int> free_multipliers,
                       std::span<const int> sos_multipliers,
                       const std::string& label = "s-procedure");

}  // namespace ltac
