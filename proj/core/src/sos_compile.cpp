#include "ltac/sos_compile.hpp"

#include <algorithm>

namespace ltac {

Polynomial GramCertificate::gram_polynomial(int nvars) const {
  Polynomial out(nvars);
  int s = static_cast<int>(basis.size());
  for (int i = 0; i < s; ++i)
    for (int j = i; j < s; ++j) {
      double w = (i == j) ? Q(i, i) : 2.0 * Q(i, j);
      if (w != 0.0) out.add_term(basis[i] * basis[j], w);
    }
  return out;
}

namespace {

/// Gram basis for one SOS constraint; see compile() docs for the rule.
std::vector<Monomial> select_basis(const SosProgram& prog, const SosConstraint& c,
                                   const std::vector<Monomial>& support) {
  int nz = prog.nz();
  unsigned max_deg = 0;
  bool z_quadratic = nz > 0 && !support.empty();
  unsigned max_xdeg = 0;
  for (const Monomial& m : support) {
    max_deg = std::max(max_deg, m.degree());
    unsigned zdeg = m.degree_tail(static_cast<std::size_t>(nz));
    if (zdeg != 2) z_quadratic = false;
    max_xdeg = std::max(max_xdeg, m.degree() - zdeg);
  }
  std::vector<Monomial> basis;
  if (z_quadratic) {
    std::vector<Monomial> xpart = monomial_basis(prog.nx(), (max_xdeg + 1) / 2, Parity::all);
    for (int zi = 0; zi < nz; ++zi)
      for (const Monomial& m : xpart) {
        Monomial full = Monomial::unit(prog.nvars());
        std::copy(m.exponents.begin(), m.exponents.end(), full.exponents.begin());
        full.exponents[prog.nx() + zi] = 1;
        basis.push_back(std::move(full));
      }
    std::sort(basis.begin(), basis.end(), [](const Monomial& a, const Monomial& b) {
      return GrlexLess{}(a, b);
    });
  } else {
    basis = monomial_basis(prog.nvars(), static_cast<int>(max_deg / 2), c.basis_parity);
  }
  return basis;
}

}  // namespace

CompiledSos compile(const SosProgram& prog) {
  CompiledSos out;
  out.num_unknowns = prog.num_unknowns();
  out.sdp.free_size = prog.num_unknowns();

  // User constraints first, then the implied SOS constraints of
  // SOS-constrained decision polynomials.
  std::vector<SosConstraint> all = prog.constraints();
  for (std::size_t d = 0; d < prog.decisions().size(); ++d) {
    const DecisionPoly& dp = prog.decisions()[d];
    if (dp.kind == DecisionKind::sos_poly) {
      SosConstraint c;
      c.expr = prog.decision_expr(static_cast<int>(d));
      c.kind = SosConstraint::Kind::sos;
      c.basis_parity = dp.parity;
      c.label = dp.name + " is SOS";
      all.push_back(std::move(c));
    }
  }
  if (all.empty()) throw SosError("compile: program has no constraints");

  std::vector<double> bvals;
  for (const SosConstraint& c : all) {
    std::vector<Monomial> support = c.expr.support();
    CompiledConstraint info;
    info.kind = c.kind;
    info.label = c.label;

    if (c.kind == SosConstraint::Kind::zero) {
      if (support.empty()) {
        out.constraints.push_back(std::move(info));
        continue;  // identically zero
      }
      for (const Monomial& mu : support) {
        SdpCoeff row;
        for (const auto& [k, p] : c.expr.linear()) row.add_free(k, p.coeff(mu));
        row.sort();
        out.sdp.constraints.push_back(std::move(row));
        bvals.push_back(-c.expr.constant().coeff(mu));
      }
      out.constraints.push_back(std::move(info));
      continue;
    }

    if (support.empty())
      throw SosError("compile: empty monomial basis for constraint '" + c.label + "'");
    std::vector<Monomial> basis = select_basis(prog, c, support);
    if (basis.empty())
      throw SosError("compile: empty monomial basis for constraint '" + c.label + "'");

    int block = static_cast<int>(out.sdp.psd_blocks.size());
    out.sdp.psd_blocks.push_back(static_cast<int>(basis.size()));
    info.block = block;
    info.basis = basis;

    // Group Gram entries by product monomial.
    std::map<Monomial, std::vector<std::pair<int, int>>, GrlexLess> products;
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = i; j < basis.size(); ++j)
        products[basis[i] * basis[j]].emplace_back(static_cast<int>(i),
                                                   static_cast<int>(j));
    for (const Monomial& mu : support) products[mu];  // ensure uncovered rows exist

    for (const auto& [mu, pairs] : products) {
      SdpCoeff row;
      for (const auto& [i, j] : pairs) row.add(block, i, j, 1.0);
      for (const auto& [k, p] : c.expr.linear()) row.add_free(k, -p.coeff(mu));
      row.sort();
      out.sdp.constraints.push_back(std::move(row));
      bvals.push_back(c.expr.constant().coeff(mu));
    }
    out.constraints.push_back(std::move(info));
  }

  out.sdp.b = Eigen::Map<const Eigen::VectorXd>(bvals.data(),
                                                static_cast<Eigen::Index>(bvals.size()));
  SdpCoeff obj;
  for (const auto& [k, w] : prog.objective()) obj.add_free(k, w);
  obj.sort();
  out.sdp.objective = std::move(obj);
  out.sdp.check_shapes();
  return out;
}

Certificate extract_certificate(const SosProgram& prog, const CompiledSos& compiled,
                                const SdpSolution& sol, const SosTolerances& tol) {
  if (sol.status != SdpStatus::optimal)
    throw SosError("extract_certificate: solver status is " + to_string(sol.status) +
                   ", no certificate available");

  Certificate cert;
  cert.unknowns = sol.free_values;
  cert.solver_residuals = sol.residuals;
  std::span<const double> w(cert.unknowns.data(), static_cast<std::size_t>(cert.unknowns.size()));

  for (std::size_t s = 0; s < prog.scalar_names().size(); ++s)
    cert.scalars[prog.scalar_names()[s]] = cert.unknowns[static_cast<Eigen::Index>(s)];
  for (const DecisionPoly& d : prog.decisions()) {
    Polynomial value(prog.nvars());
    for (std::size_t k = 0; k < d.basis.size(); ++k)
      value.add_term(d.basis[k], cert.unknowns[d.first_unknown + static_cast<int>(k)]);
    cert.polynomials[d.name] = std::move(value);
  }
  for (const auto& [k, weight] : prog.objective())
    cert.objective += weight * cert.unknowns[k];

  // Gram validation against the instantiated expressions.
  std::vector<SosConstraint> all = prog.constraints();
  for (std::size_t d = 0; d < prog.decisions().size(); ++d) {
    const DecisionPoly& dp = prog.decisions()[d];
    if (dp.kind == DecisionKind::sos_poly) {
      SosConstraint c;
      c.expr = prog.decision_expr(static_cast<int>(d));
      c.kind = SosConstraint::Kind::sos;
      c.label = dp.name + " is SOS";
      all.push_back(std::move(c));
    }
  }
  for (std::size_t ci = 0; ci < all.size(); ++ci) {
    const CompiledConstraint& info = compiled.constraints.at(ci);
    if (info.kind != SosConstraint::Kind::sos) continue;
    GramCertificate g;
    g.label = info.label;
    g.basis = info.basis;
    g.Q = sol.X.at(info.block);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.Q, Eigen::EigenvaluesOnly);
    g.min_eigenvalue = es.eigenvalues().minCoeff();
    Polynomial target = all[ci].expr.substitute(w);
    g.residual = Polynomial::coeff_distance(target, g.gram_polynomial(prog.nvars()));
    if (g.residual > tol.match_tol)
      throw CertificateError("certificate invalid: Gram residual " +
                                 format_double(g.residual) + " exceeds match_tol for '" +
                                 info.label + "'",
                             g.residual);
    if (g.min_eigenvalue < -tol.eig_tol)
      throw CertificateError("certificate invalid: Gram matrix eigenvalue " +
                                 format_double(g.min_eigenvalue) + " below -eig_tol for '" +
                                 info.label + "'",
                             g.min_eigenvalue);
    cert.grams.push_back(std::move(g));
  }
  return cert;
}

SosCheck check_sos(const Polynomial& p, const SdpOptions& opts, const SosTolerances& tol) {
  SosProgram prog(p.nvars());
  prog.add_sos(AffinePoly(p), "expression");
  CompiledSos compiled = compile(prog);
  SdpSolution sol = solve(compiled.sdp, opts);
  SosCheck out;
  out.solver_status = sol.status;
  switch (sol.status) {
    case SdpStatus::optimal: {
      Certificate cert = extract_certificate(prog, compiled, sol, tol);
      out.verdict = SosVerdict::is_sos;
      out.gram = cert.grams.front();
      break;
    }
    case SdpStatus::primal_infeasible:
      out.verdict = SosVerdict::not_sos;
      break;
    default:
      out.verdict = SosVerdict::inconclusive;
      break;
  }
  return out;
}

}  // namespace ltac
