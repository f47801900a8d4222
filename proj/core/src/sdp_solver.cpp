#include <algorithm>
#include <cmath>
#include <limits>

#include "ltac/sdp.hpp"

namespace ltac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int tri_size(int s) { return s * (s + 1) / 2; }

/// Scatters one coefficient into an svec row (off-diagonals scaled by
/// sqrt(2) so Euclidean inner products match matrix inner products).
void fill_svec(const SdpCoeff& c, const std::vector<int>& block_offsets, int free_offset,
               Eigen::VectorXd& row) {
  const double rt2 = std::sqrt(2.0);
  for (const auto& e : c.entries) {
    int base = block_offsets[e.block];
    int idx = base + e.j * (e.j + 1) / 2 + e.i;
    row[idx] += (e.i == e.j) ? e.value : rt2 * e.value;
  }
  for (const auto& [k, v] : c.free_entries) row[free_offset + k] += v;
}

struct Presolve {
  std::vector<int> keep;
  bool inconsistent = false;
};

/// Rank-revealing QR on the constraint rows; drops dependent rows and
/// detects inconsistent right-hand sides.
Presolve presolve_rows(const SdpProblem& p, double pivot_tol) {
  int m = p.num_constraints();
  std::vector<int> offsets;
  int n = 0;
  for (int s : p.psd_blocks) {
    offsets.push_back(n);
    n += tri_size(s);
  }
  int free_offset = n;
  n += p.free_size;

  Eigen::MatrixXd At(n + 1, m);  // last row carries b for the consistency check
  At.setZero();
  for (int k = 0; k < m; ++k) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
    fill_svec(p.constraints[k], offsets, free_offset, row);
    At.col(k).head(n) = row;
    At(n, k) = 0.0;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(At.topRows(n));
  qr.setThreshold(pivot_tol);
  int rank = static_cast<int>(qr.rank());

  Presolve out;
  if (rank < m) {
    for (int k = 0; k < m; ++k) At(n, k) = p.b[k];
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr2(At);
    qr2.setThreshold(pivot_tol);
    if (static_cast<int>(qr2.rank()) > rank) {
      out.inconsistent = true;
      return out;
    }
  }

  out.keep.assign(qr.colsPermutation().indices().data(),
                  qr.colsPermutation().indices().data() + rank);
  std::sort(out.keep.begin(), out.keep.end());
  return out;
}

double inner_psd(const SdpCoeff& c, const std::vector<Eigen::MatrixXd>& X) {
  double sum = 0.0;
  for (const auto& e : c.entries)
    sum += (e.i == e.j) ? e.value * X[e.block](e.i, e.i)
                        : 2.0 * e.value * X[e.block](e.i, e.j);
  return sum;
}

double inner(const SdpCoeff& c, const std::vector<Eigen::MatrixXd>& X,
             const Eigen::VectorXd& u) {
  double sum = inner_psd(c, X);
  for (const auto& [k, v] : c.free_entries) sum += v * u[k];
  return sum;
}

/// <c, K> for a possibly nonsymmetric dense K (treats c as full symmetric).
double inner_full(const SdpCoeff& c, const std::vector<Eigen::MatrixXd>& K) {
  double sum = 0.0;
  for (const auto& e : c.entries) {
    if (e.i == e.j)
      sum += e.value * K[e.block](e.i, e.i);
    else
      sum += e.value * (K[e.block](e.i, e.j) + K[e.block](e.j, e.i));
  }
  return sum;
}

void accumulate(const SdpCoeff& c, double weight, std::vector<Eigen::MatrixXd>& out) {
  for (const auto& e : c.entries) {
    out[e.block](e.i, e.j) += weight * e.value;
    if (e.i != e.j) out[e.block](e.j, e.i) += weight * e.value;
  }
}

/// X * A * Sinv for sparse symmetric A.
Eigen::MatrixXd sandwich(const Eigen::MatrixXd& X, const SdpCoeff& c, int block,
                         const Eigen::MatrixXd& Sinv) {
  int s = static_cast<int>(X.rows());
  Eigen::MatrixXd XA = Eigen::MatrixXd::Zero(s, s);
  for (const auto& e : c.entries) {
    if (e.block != block) continue;
    XA.col(e.j) += e.value * X.col(e.i);
    if (e.i != e.j) XA.col(e.i) += e.value * X.col(e.j);
  }
  return XA * Sinv;
}

double frob(const SdpCoeff& c) {
  double sum = 0.0;
  for (const auto& e : c.entries) sum += (e.i == e.j ? 1.0 : 2.0) * e.value * e.value;
  for (const auto& [k, v] : c.free_entries) {
    (void)k;
    sum += v * v;
  }
  return std::sqrt(sum);
}

/// Largest alpha with M + alpha*D staying positive semidefinite, via the
/// eigenvalues of L^-1 D L^-T.
double max_step(const Eigen::MatrixXd& M, const Eigen::MatrixXd& D) {
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) return 0.0;
  Eigen::MatrixXd W =
      llt.matrixL().solve(llt.matrixL().solve(D).transpose()).transpose();
  Eigen::MatrixXd Ws = 0.5 * (W + W.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ws, Eigen::EigenvaluesOnly);
  double lmin = es.eigenvalues().minCoeff();
  if (lmin >= 0.0) return kInf;
  return -1.0 / lmin;
}

struct SchurFactor {
  Eigen::LLT<Eigen::MatrixXd> lltM;
  Eigen::LLT<Eigen::MatrixXd> lltF;
};

bool ridge_llt(Eigen::MatrixXd M, Eigen::LLT<Eigen::MatrixXd>& llt) {
  double base = std::max(1.0, M.diagonal().cwiseAbs().maxCoeff());
  double ridge = 0.0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::MatrixXd Mr = M;
    if (ridge > 0.0) Mr.diagonal().array() += ridge;
    llt.compute(Mr);
    if (llt.info() == Eigen::Success) return true;
    ridge = (ridge == 0.0) ? 1e-14 * base : ridge * 100.0;
    if (ridge > 1e-4 * base) break;
  }
  return false;
}

}  // namespace

SdpResiduals residuals(const SdpProblem& p, const SdpSolution& sol) {
  SdpResiduals r;
  int m = p.num_constraints();
  for (int k = 0; k < m; ++k)
    r.primal = std::max(r.primal,
                        std::abs(inner(p.constraints[k], sol.X, sol.free_values) - p.b[k]));

  std::vector<Eigen::MatrixXd> D;
  for (std::size_t bidx = 0; bidx < p.psd_blocks.size(); ++bidx)
    D.emplace_back(Eigen::MatrixXd::Zero(p.psd_blocks[bidx], p.psd_blocks[bidx]));
  accumulate(p.objective, 1.0, D);
  for (int k = 0; k < m; ++k) accumulate(p.constraints[k], -sol.y[k], D);
  for (std::size_t bidx = 0; bidx < D.size(); ++bidx)
    r.dual = std::max(r.dual, (D[bidx] - sol.S[bidx]).cwiseAbs().maxCoeff());

  Eigen::VectorXd rf = Eigen::VectorXd::Zero(p.free_size);
  for (const auto& [k, v] : p.objective.free_entries) rf[k] += v;
  for (int k = 0; k < m; ++k)
    for (const auto& [idx, v] : p.constraints[k].free_entries) rf[idx] -= sol.y[k] * v;
  if (p.free_size > 0) r.dual = std::max(r.dual, rf.cwiseAbs().maxCoeff());

  double pobj = inner(p.objective, sol.X, sol.free_values);
  double dobj = p.b.dot(sol.y);
  r.gap = std::abs(pobj - dobj) / (1.0 + std::abs(dobj));
  return r;
}

SdpSolution solve(const SdpProblem& p, const SdpOptions& opts) {
  p.check_shapes();
  int m = p.num_constraints();
  int nblocks = static_cast<int>(p.psd_blocks.size());
  int f = p.free_size;
  int total_dim = 0;
  for (int s : p.psd_blocks) total_dim += s;

  SdpSolution sol;
  sol.X.reserve(nblocks);
  sol.S.reserve(nblocks);
  for (int s : p.psd_blocks) {
    sol.X.emplace_back(Eigen::MatrixXd::Zero(s, s));
    sol.S.emplace_back(Eigen::MatrixXd::Zero(s, s));
  }
  sol.free_values = Eigen::VectorXd::Zero(f);
  sol.y = Eigen::VectorXd::Zero(m);

  if (nblocks == 0) throw SdpError("solve: problem has no PSD blocks");

  Presolve pre = presolve_rows(p, opts.presolve_pivot_tol);
  if (pre.inconsistent) {
    sol.status = SdpStatus::primal_infeasible;
    sol.message = "equality presolve: inconsistent linear constraints";
    return sol;
  }
  const std::vector<int>& keep = pre.keep;
  int mr = static_cast<int>(keep.size());
  if (mr == 0) {
    // No effective constraints; X = 0 is optimal iff C is PSD and c_f = 0.
    sol.message = "no independent constraints";
    std::vector<Eigen::MatrixXd> C;
    for (int s : p.psd_blocks) C.emplace_back(Eigen::MatrixXd::Zero(s, s));
    accumulate(p.objective, 1.0, C);
    bool psd = true;
    for (const auto& Cb : C) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Cb, Eigen::EigenvaluesOnly);
      if (Cb.rows() > 0 && es.eigenvalues().minCoeff() < -opts.feas_tol) psd = false;
    }
    for (const auto& [k, v] : p.objective.free_entries) {
      (void)k;
      if (v != 0.0) psd = false;
    }
    sol.status = psd ? SdpStatus::optimal : SdpStatus::dual_infeasible;
    for (int bidx = 0; bidx < nblocks; ++bidx) sol.S[bidx] = C[bidx];
    sol.residuals = residuals(p, sol);
    return sol;
  }

  // Dense free-block slice of the kept constraints.
  Eigen::MatrixXd Af = Eigen::MatrixXd::Zero(mr, f);
  Eigen::VectorXd br(mr);
  for (int k = 0; k < mr; ++k) {
    br[k] = p.b[keep[k]];
    for (const auto& [idx, v] : p.constraints[keep[k]].free_entries) Af(k, idx) = v;
  }
  Eigen::VectorXd cf = Eigen::VectorXd::Zero(f);
  for (const auto& [idx, v] : p.objective.free_entries) cf[idx] = v;

  // Free variables that no kept constraint touches cannot be pinned by the
  // KKT system: drop them (value 0) or detect an unbounded objective ray.
  std::vector<int> free_active;
  for (int k = 0; k < f; ++k) {
    if (Af.col(k).cwiseAbs().maxCoeff() > 0.0) {
      free_active.push_back(k);
    } else if (cf[k] != 0.0) {
      sol.status = SdpStatus::dual_infeasible;
      sol.message = "free variable with objective weight appears in no constraint";
      return sol;
    }
  }
  int fa = static_cast<int>(free_active.size());
  Eigen::MatrixXd Afa(mr, fa);
  Eigen::VectorXd cfa(fa);
  for (int k = 0; k < fa; ++k) {
    Afa.col(k) = Af.col(free_active[k]);
    cfa[k] = cf[free_active[k]];
  }

  // Starting point: identity-scaled blocks, y = 0 (SDPT3-style scale guess).
  double bscale = 0.0, ascale = 0.0;
  for (int k = 0; k < mr; ++k) {
    double an = frob(p.constraints[keep[k]]);
    bscale = std::max(bscale, (1.0 + std::abs(br[k])) / (1.0 + an));
    ascale = std::max(ascale, an);
  }
  double cnorm = frob(p.objective);
  double eta_p = std::max({10.0, std::sqrt(static_cast<double>(total_dim)),
                           static_cast<double>(total_dim) * bscale});
  double eta_d = std::max({10.0, std::sqrt(static_cast<double>(total_dim)),
                           (1.0 + std::max(cnorm, ascale)) /
                               std::sqrt(static_cast<double>(total_dim))});

  std::vector<Eigen::MatrixXd> X, S, C;
  for (int s : p.psd_blocks) {
    X.emplace_back(eta_p * Eigen::MatrixXd::Identity(s, s));
    S.emplace_back(eta_d * Eigen::MatrixXd::Identity(s, s));
    C.emplace_back(Eigen::MatrixXd::Zero(s, s));
  }
  accumulate(p.objective, 1.0, C);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(mr);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(fa);

  auto fill_solution = [&](SdpStatus status, const std::string& msg) {
    sol.status = status;
    sol.message = msg;
    for (int bidx = 0; bidx < nblocks; ++bidx) {
      sol.X[bidx] = X[bidx];
      sol.S[bidx] = S[bidx];
    }
    sol.free_values.setZero();
    for (int k = 0; k < fa; ++k) sol.free_values[free_active[k]] = u[k];
    sol.y.setZero();
    for (int k = 0; k < mr; ++k) sol.y[keep[k]] = y[k];
    sol.primal_obj = inner(p.objective, sol.X, sol.free_values);
    sol.dual_obj = p.b.dot(sol.y);
    sol.residuals = residuals(p, sol);
  };

  std::vector<Eigen::MatrixXd> Sinv(nblocks), Rd(nblocks), G1(nblocks), Rc(nblocks);
  std::vector<Eigen::MatrixXd> dXa(nblocks), dSa(nblocks), dX(nblocks), dS(nblocks);
  Eigen::MatrixXd M(mr, mr);
  std::vector<std::vector<Eigen::MatrixXd>> K(mr);

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    // Residuals in the original problem space drive the stopping tests.
    fill_solution(SdpStatus::max_iters, "");
    double pobj = sol.primal_obj;
    double dobj = sol.dual_obj;
    const SdpResiduals& res = sol.residuals;
    double mu = 0.0;
    for (int bidx = 0; bidx < nblocks; ++bidx) mu += X[bidx].cwiseProduct(S[bidx]).sum();
    mu /= std::max(1, total_dim);

    SdpIterate it;
    it.iter = iter;
    it.mu = mu;
    it.primal_obj = pobj;
    it.dual_obj = dobj;
    it.primal_res = res.primal;
    it.dual_res = res.dual;
    sol.trace.push_back(it);
    sol.iterations = iter;

    if (res.primal <= opts.feas_tol && res.dual <= opts.feas_tol &&
        res.gap <= opts.gap_tol) {
      fill_solution(SdpStatus::optimal, "converged");
      sol.iterations = iter;
      return sol;
    }
    if (dobj > opts.divergence_threshold && res.dual <= opts.feas_tol) {
      fill_solution(SdpStatus::primal_infeasible, "dual objective diverged");
      sol.iterations = iter;
      return sol;
    }
    if (pobj < -opts.divergence_threshold && res.primal <= opts.feas_tol) {
      fill_solution(SdpStatus::dual_infeasible, "primal objective diverged");
      sol.iterations = iter;
      return sol;
    }

    // Newton machinery: Sinv, dual residual matrices, Schur complement.
    bool sinv_ok = true;
    for (int bidx = 0; bidx < nblocks; ++bidx) {
      Eigen::LLT<Eigen::MatrixXd> llt(S[bidx]);
      if (llt.info() != Eigen::Success) {
        sinv_ok = false;
        break;
      }
      Sinv[bidx] =
          llt.solve(Eigen::MatrixXd::Identity(S[bidx].rows(), S[bidx].cols()));
      Rd[bidx] = C[bidx] - S[bidx];
    }
    if (!sinv_ok) {
      fill_solution(SdpStatus::numerical_failure, "dual slack lost definiteness");
      return sol;
    }
    for (int k = 0; k < mr; ++k) accumulate(p.constraints[keep[k]], -y[k], Rd);

    Eigen::VectorXd rp(mr);
    for (int k = 0; k < mr; ++k)
      rp[k] = br[k] - Afa.row(k).dot(u) - inner_psd(p.constraints[keep[k]], X);
    Eigen::VectorXd rf = cfa - Afa.transpose() * y;

    for (int j = 0; j < mr; ++j) {
      K[j].resize(nblocks);
      for (int bidx = 0; bidx < nblocks; ++bidx)
        K[j][bidx] = sandwich(X[bidx], p.constraints[keep[j]], bidx, Sinv[bidx]);
      for (int i = 0; i < mr; ++i) M(i, j) = inner_full(p.constraints[keep[i]], K[j]);
    }
    M = 0.5 * (M + M.transpose()).eval();

    SchurFactor fac;
    if (!ridge_llt(M, fac.lltM)) {
      fill_solution(SdpStatus::numerical_failure, "Schur complement not factorizable");
      return sol;
    }
    if (fa > 0) {
      Eigen::MatrixXd F = Afa.transpose() * fac.lltM.solve(Afa);
      F = 0.5 * (F + F.transpose()).eval();
      if (!ridge_llt(F, fac.lltF)) {
        fill_solution(SdpStatus::numerical_failure, "free-block system not factorizable");
        return sol;
      }
    }

    auto solve_kkt = [&](const Eigen::VectorXd& h, const Eigen::VectorXd& rfree,
                         Eigen::VectorXd& dy, Eigen::VectorXd& du) {
      if (fa > 0) {
        Eigen::VectorXd t = fac.lltM.solve(h);
        du = fac.lltF.solve(Afa.transpose() * t - rfree);
        dy = fac.lltM.solve(h - Afa * du);
      } else {
        du.resize(0);
        dy = fac.lltM.solve(h);
      }
    };

    auto newton = [&](const std::vector<Eigen::MatrixXd>& Rcomp, Eigen::VectorXd& dy,
                      Eigen::VectorXd& du, std::vector<Eigen::MatrixXd>& dXo,
                      std::vector<Eigen::MatrixXd>& dSo) {
      for (int bidx = 0; bidx < nblocks; ++bidx)
        G1[bidx] = Rcomp[bidx] * Sinv[bidx] - X[bidx] * (Rd[bidx] * Sinv[bidx]);
      Eigen::VectorXd h(mr);
      for (int k = 0; k < mr; ++k)
        h[k] = rp[k] - inner_full(p.constraints[keep[k]], G1);
      solve_kkt(h, rf, dy, du);
      for (int bidx = 0; bidx < nblocks; ++bidx) dSo[bidx] = Rd[bidx];
      for (int k = 0; k < mr; ++k) accumulate(p.constraints[keep[k]], -dy[k], dSo);
      for (int bidx = 0; bidx < nblocks; ++bidx) {
        Eigen::MatrixXd raw = (Rcomp[bidx] - X[bidx] * dSo[bidx]) * Sinv[bidx];
        dXo[bidx] = 0.5 * (raw + raw.transpose());
      }
    };

    // Predictor (affine scaling direction).
    for (int bidx = 0; bidx < nblocks; ++bidx) Rc[bidx] = -X[bidx] * S[bidx];
    Eigen::VectorXd dya, dua;
    newton(Rc, dya, dua, dXa, dSa);

    double ap_aff = 1.0, ad_aff = 1.0;
    for (int bidx = 0; bidx < nblocks; ++bidx) {
      ap_aff = std::min(ap_aff, opts.step_fraction * max_step(X[bidx], dXa[bidx]));
      ad_aff = std::min(ad_aff, opts.step_fraction * max_step(S[bidx], dSa[bidx]));
    }

    double mu_aff = 0.0;
    for (int bidx = 0; bidx < nblocks; ++bidx)
      mu_aff += (X[bidx] + ap_aff * dXa[bidx])
                    .cwiseProduct(S[bidx] + ad_aff * dSa[bidx])
                    .sum();
    mu_aff = std::max(mu_aff / std::max(1, total_dim), 0.0);
    double sigma = std::pow(mu_aff / std::max(mu, 1e-300), 3.0);
    sigma = std::clamp(sigma, 0.0, 1.0);

    // Corrector with centering and the Mehrotra second-order term.
    for (int bidx = 0; bidx < nblocks; ++bidx) {
      Rc[bidx] = -X[bidx] * S[bidx] - dXa[bidx] * dSa[bidx];
      Rc[bidx].diagonal().array() += sigma * mu;
    }
    Eigen::VectorXd dy, du;
    newton(Rc, dy, du, dX, dS);

    double ap = 1.0, ad = 1.0;
    for (int bidx = 0; bidx < nblocks; ++bidx) {
      ap = std::min(ap, opts.step_fraction * max_step(X[bidx], dX[bidx]));
      ad = std::min(ad, opts.step_fraction * max_step(S[bidx], dS[bidx]));
    }
    if (!(ap > 1e-12) && !(ad > 1e-12)) {
      fill_solution(SdpStatus::numerical_failure, "step length collapsed");
      return sol;
    }

    sol.trace.back().step_primal = ap;
    sol.trace.back().step_dual = ad;

    for (int bidx = 0; bidx < nblocks; ++bidx) {
      X[bidx] += ap * dX[bidx];
      S[bidx] += ad * dS[bidx];
    }
    if (fa > 0) u += ap * du;
    y += ad * dy;
  }

  fill_solution(SdpStatus::max_iters, "iteration limit reached");
  sol.iterations = opts.max_iters;
  return sol;
}

}  // namespace ltac
