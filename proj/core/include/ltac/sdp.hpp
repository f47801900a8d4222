#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace ltac {

class SdpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One stored entry of a symmetric block matrix, upper triangle (i <= j).
struct SdpEntry {
  int block = 0;  // PSD block index
  int i = 0;
  int j = 0;
  double value = 0.0;

  bool operator==(const SdpEntry&) const = default;
};

/// Sparse symmetric block data for one constraint matrix or the objective:
/// entries over the PSD blocks plus a dense slice of the free block.
struct SdpCoeff {
  std::vector<SdpEntry> entries;                     // sorted (block, i, j)
  std::vector<std::pair<int, double>> free_entries;  // (free index, value), sorted

  void add(int block, int i, int j, double v);
  void add_free(int index, double v);
  void sort();

  bool operator==(const SdpCoeff&) const = default;
};

/// Standard-form semidefinite program
///
///   minimize    <C, X> + c_f . u
///   subject to  <A_k, X> + a_kf . u = b_k,   k = 1..m
///               X in product of PSD cones, u free.
///
/// Immutable once built; a solve does not modify the problem.
struct SdpProblem {
  std::vector<int> psd_blocks;  // block sizes
  int free_size = 0;
  SdpCoeff objective;
  std::vector<SdpCoeff> constraints;
  Eigen::VectorXd b;

  int num_constraints() const { return static_cast<int>(constraints.size()); }
  void check_shapes() const;

  bool operator==(const SdpProblem& other) const;
};

enum class SdpStatus {
  optimal,
  primal_infeasible,
  dual_infeasible,
  max_iters,
  numerical_failure,
};

std::string to_string(SdpStatus s);

struct SdpResiduals {
  double primal = 0.0;  // ||A(X) - b||_inf
  double dual = 0.0;    // ||A^T y + S - C||_inf over blocks (free rows included)
  double gap = 0.0;     // |<C,X> - b.y| / (1 + |b.y|)
};

struct SdpIterate {
  int iter = 0;
  double mu = 0.0;
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double primal_res = 0.0;
  double dual_res = 0.0;
  double step_primal = 0.0;
  double step_dual = 0.0;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::numerical_failure;
  std::vector<Eigen::MatrixXd> X;  // primal PSD blocks
  Eigen::VectorXd free_values;     // primal free block u
  Eigen::VectorXd y;               // dual vector
  std::vector<Eigen::MatrixXd> S;  // dual slacks
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  SdpResiduals residuals;
  int iterations = 0;
  std::vector<SdpIterate> trace;
  std::string message;

  bool ok() const { return status == SdpStatus::optimal; }
};

struct SdpOptions {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iters = 200;
  /// Dual objective magnitude beyond which a feasible-dual iterate is read
  /// as an infeasibility certificate.
  double divergence_threshold = 1e10;
  /// Relative pivot threshold for the QR presolve that drops dependent
  /// equality rows.
  double presolve_pivot_tol = 1e-10;
  double step_fraction = 0.98;
};

/// Primal-dual path-following interior-point solve (HKM scaling, Mehrotra
/// predictor-corrector, dense Cholesky of the Schur complement). Equality
/// presolve removes dependent rows first; inconsistent rows yield a
/// primal-infeasible verdict directly. Deterministic for identical input.
SdpSolution solve(const SdpProblem& p, const SdpOptions& opts = {});

/// Residuals of an arbitrary (problem, solution) pair, measured against the
/// original problem data.
SdpResiduals residuals(const SdpProblem& p, const SdpSolution& sol);

/// SDPA sparse text form (.dat-s). Layout: #constraints, #blocks, block
/// sizes (free block, when present, last and negative), the right-hand side
/// b, then "cons# block# i j value" entries with 17-significant-digit
/// coefficients, upper triangle only. cons# 0 carries the objective with a
/// sign flip (F0 = -C) so external SDPA-family solvers optimize the same
/// problem; import applies the inverse flip, so round-trips are exact.
std::string export_sdpa(const SdpProblem& p);
SdpProblem import_sdpa(const std::string& text);

}  // namespace ltac
