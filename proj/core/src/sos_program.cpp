#include "ltac/sos_program.hpp"

#include <algorithm>

namespace ltac {

std::vector<Monomial> monomial_basis(int nvars, int max_deg, Parity parity) {
  if (max_deg < 0) throw SosError("monomial_basis: negative degree bound");
  std::vector<Monomial> out;
  Monomial current = Monomial::unit(nvars);
  // Enumerate recursively, then sort into graded-lex order.
  std::vector<unsigned> exps(nvars, 0);
  auto emit = [&](auto&& self, int var, int remaining) -> void {
    if (var == nvars) {
      Monomial m{exps};
      if (parity == Parity::even && m.degree() % 2 != 0) return;
      out.push_back(std::move(m));
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      exps[var] = static_cast<unsigned>(e);
      self(self, var + 1, remaining - e);
    }
    exps[var] = 0;
  };
  if (nvars == 0) {
    out.push_back(Monomial{{}});
  } else {
    emit(emit, 0, max_deg);
  }
  std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
    return GrlexLess{}(a, b);
  });
  return out;
}

AffinePoly AffinePoly::unknown_term(int unknown, Polynomial multiplier) {
  AffinePoly out(multiplier.nvars());
  if (!multiplier.is_zero()) out.linear_.emplace(unknown, std::move(multiplier));
  return out;
}

AffinePoly AffinePoly::operator+(const AffinePoly& other) const {
  AffinePoly out = *this;
  out.constant_ = out.constant_ + other.constant_;
  for (const auto& [k, p] : other.linear_) {
    auto it = out.linear_.find(k);
    if (it == out.linear_.end()) {
      out.linear_.emplace(k, p);
    } else {
      it->second = it->second + p;
      if (it->second.is_zero()) out.linear_.erase(it);
    }
  }
  return out;
}

AffinePoly AffinePoly::operator-(const AffinePoly& other) const { return *this + (-other); }

AffinePoly AffinePoly::operator-() const {
  AffinePoly out(nvars());
  out.constant_ = -constant_;
  for (const auto& [k, p] : linear_) out.linear_.emplace(k, -p);
  return out;
}

AffinePoly AffinePoly::operator*(const AffinePoly& other) const {
  if (!is_known() && !other.is_known())
    throw SosError("non-affine expression: product of two unknown-bearing terms");
  const AffinePoly& known = is_known() ? *this : other;
  const AffinePoly& gen = is_known() ? other : *this;
  AffinePoly out(nvars());
  out.constant_ = gen.constant_ * known.constant_;
  for (const auto& [k, p] : gen.linear_) {
    Polynomial prod = p * known.constant_;
    if (!prod.is_zero()) out.linear_.emplace(k, std::move(prod));
  }
  return out;
}

AffinePoly AffinePoly::operator*(double s) const {
  AffinePoly out(nvars());
  out.constant_ = constant_ * s;
  if (s != 0.0)
    for (const auto& [k, p] : linear_) out.linear_.emplace(k, p * s);
  return out;
}

AffinePoly AffinePoly::derivative(int var) const {
  AffinePoly out(nvars());
  out.constant_ = constant_.derivative(var);
  for (const auto& [k, p] : linear_) {
    Polynomial d = p.derivative(var);
    if (!d.is_zero()) out.linear_.emplace(k, std::move(d));
  }
  return out;
}

Polynomial AffinePoly::substitute(std::span<const double> unknown_values) const {
  Polynomial out = constant_;
  for (const auto& [k, p] : linear_) {
    if (k < 0 || k >= static_cast<int>(unknown_values.size()))
      throw SosError("substitute: unknown index out of range");
    out = out + p * unknown_values[k];
  }
  return out;
}

std::vector<Monomial> AffinePoly::support() const {
  std::map<Monomial, bool, GrlexLess> seen;
  for (const auto& [m, c] : constant_.terms()) seen.emplace(m, true);
  for (const auto& [k, p] : linear_)
    for (const auto& [m, c] : p.terms()) seen.emplace(m, true);
  std::vector<Monomial> out;
  out.reserve(seen.size());
  for (const auto& [m, b] : seen) out.push_back(m);
  return out;
}

unsigned AffinePoly::max_degree() const {
  unsigned d = constant_.degree();
  for (const auto& [k, p] : linear_) d = std::max(d, p.degree());
  return d;
}

SosProgram::SosProgram(int nx, int nz) : layout_{nx, nz} {
  if (nx < 0 || nz < 0) throw SosError("SosProgram: negative variable count");
}

int SosProgram::add_scalar(const std::string& name) {
  if (!decisions_.empty())
    throw SosError("add_scalar: declare scalars before decision polynomials");
  scalar_names_.push_back(name);
  return num_unknowns_++;
}

int SosProgram::add_decision(DecisionPoly spec) {
  int scope_vars = (spec.scope == VarScope::x_only) ? layout_.nx : nvars();
  std::vector<Monomial> base = monomial_basis(scope_vars, spec.degree, spec.parity);
  spec.basis.clear();
  for (const Monomial& m : base) {
    if (!spec.include_constant && m.degree() == 0) continue;
    Monomial full = Monomial::unit(nvars());
    std::copy(m.exponents.begin(), m.exponents.end(), full.exponents.begin());
    spec.basis.push_back(std::move(full));
  }
  if (spec.basis.empty())
    throw SosError("decision polynomial '" + spec.name + "' has an empty basis");
  spec.first_unknown = num_unknowns_;
  num_unknowns_ += static_cast<int>(spec.basis.size());
  decisions_.push_back(std::move(spec));
  return static_cast<int>(decisions_.size()) - 1;
}

AffinePoly SosProgram::scalar_expr(int scalar_handle) const {
  if (scalar_handle < 0 || scalar_handle >= static_cast<int>(scalar_names_.size()))
    throw SosError("scalar handle out of range");
  return AffinePoly::unknown_term(scalar_handle, Polynomial::constant(nvars(), 1.0));
}

AffinePoly SosProgram::decision_expr(int decision_handle) const {
  const DecisionPoly& d = decision(decision_handle);
  AffinePoly out(nvars());
  for (std::size_t k = 0; k < d.basis.size(); ++k)
    out = out + AffinePoly::unknown_term(d.first_unknown + static_cast<int>(k),
                                         Polynomial::term(d.basis[k], 1.0));
  return out;
}

std::vector<AffinePoly> SosProgram::decision_gradient(int decision_handle) const {
  AffinePoly e = decision_expr(decision_handle);
  std::vector<AffinePoly> out;
  out.reserve(nvars());
  for (int i = 0; i < nvars(); ++i) out.push_back(e.derivative(i));
  return out;
}

void SosProgram::add_sos(AffinePoly expr, std::string label, Parity basis_parity) {
  if (expr.nvars() != nvars()) throw SosError("add_sos: variable count mismatch");
  constraints_.push_back({std::move(expr), SosConstraint::Kind::sos, basis_parity,
                          std::move(label)});
}

void SosProgram::add_zero(AffinePoly expr, std::string label) {
  if (expr.nvars() != nvars()) throw SosError("add_zero: variable count mismatch");
  constraints_.push_back({std::move(expr), SosConstraint::Kind::zero, Parity::all,
                          std::move(label)});
}

void SosProgram::minimize(std::vector<std::pair<int, double>> weights) {
  for (const auto& [k, w] : weights) {
    (void)w;
    if (k < 0 || k >= num_unknowns_) throw SosError("objective references unknown out of range");
  }
  objective_ = std::move(weights);
}

std::string SosProgram::unknown_name(int unknown) const {
  if (unknown < static_cast<int>(scalar_names_.size())) return scalar_names_[unknown];
  for (const auto& d : decisions_) {
    int count = static_cast<int>(d.basis.size());
    if (unknown >= d.first_unknown && unknown < d.first_unknown + count)
      return d.name + "[" + std::to_string(unknown - d.first_unknown) + "]";
  }
  return "w" + std::to_string(unknown);
}

AffinePoly s_procedure(SosProgram& prog, const AffinePoly& f0,
                       std::span<const Polynomial> h, std::span<const Polynomial> f,
                       std::span<const int> free_multipliers,
                       std::span<const int> sos_multipliers, const std::string& label) {
  if (h.size() != free_multipliers.size())
    throw SosError("s_procedure: one free multiplier per equality expression required");
  if (f.size() != sos_multipliers.size())
    throw SosError("s_procedure: one SOS multiplier per inequality expression required");
  AffinePoly expr = f0;
  for (std::size_t i = 0; i < h.size(); ++i)
    expr = expr + prog.decision_expr(free_multipliers[i]) * AffinePoly(h[i]);
  for (std::size_t i = 0; i < f.size(); ++i)
    expr = expr - prog.decision_expr(sos_multipliers[i]) * AffinePoly(f[i]);
  if (expr.max_degree() % 2 != 0)
    throw SosError("s_procedure: combined expression has odd top degree " +
                   std::to_string(expr.max_degree()));
  for (int handle : sos_multipliers)
    if (prog.decision(handle).kind != DecisionKind::sos_poly)
      throw SosError("s_procedure: inequality multiplier must be SOS-constrained");
  prog.add_sos(expr, label);
  return expr;
}

}  // namespace ltac
