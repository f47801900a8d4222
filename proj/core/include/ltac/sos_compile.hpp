#pragma once

#include <Eigen/Dense>

#include "ltac/sdp.hpp"
#include "ltac/sos_program.hpp"

namespace ltac {

class CertificateError : public std::runtime_error {
 public:
  CertificateError(const std::string& msg, double residual)
      : std::runtime_error(msg), residual(residual) {}
  double residual = 0.0;
};

/// SOS witness for one constraint: expression == m(x)^T Q m(x) with Q PSD
/// up to the recorded tolerances.
struct GramCertificate {
  std::string label;
  std::vector<Monomial> basis;
  Eigen::MatrixXd Q;
  double residual = 0.0;        // coefficient mismatch, infinity norm
  double min_eigenvalue = 0.0;

  /// m^T Q m as a polynomial over `nvars` variables.
  Polynomial gram_polynomial(int nvars) const;
};

/// Numeric values of all unknowns plus per-constraint Gram witnesses.
struct Certificate {
  Eigen::VectorXd unknowns;
  std::map<std::string, double> scalars;
  std::map<std::string, Polynomial> polynomials;  // decision name -> value
  std::vector<GramCertificate> grams;
  double objective = 0.0;
  SdpResiduals solver_residuals;
};

struct CompiledConstraint {
  SosConstraint::Kind kind;
  int block = -1;  // PSD block index for SOS constraints
  std::vector<Monomial> basis;
  std::string label;
};

/// Compilation result: the standard-form SDP and the bookkeeping needed to
/// reconstruct certificates from its solutions. Unknown k of the program is
/// free variable k of the SDP.
struct CompiledSos {
  SdpProblem sdp;
  std::vector<CompiledConstraint> constraints;
  int num_unknowns = 0;
};

struct SosTolerances {
  double match_tol = 1e-6;
  double eig_tol = 1e-8;
};

/// Lowers an SOS program to a standard-form SDP. Each SOS constraint gets a
/// Gram matrix block linked by coefficient-matching equalities; scalar and
/// coefficient unknowns land in the free block; SOS-kind decision
/// polynomials get their own SOS constraint appended. Deterministic:
/// identical programs compile to identical SDPs.
///
/// Gram basis selection: full graded basis of degree floor(D/2) (optional
/// even filter), except that constraints whose support is homogeneous of
/// degree exactly 2 in the trailing auxiliary variables use the z-linear
/// basis {z_i * m(x)}, which keeps the Schur-lifted programs strictly
/// feasible.
CompiledSos compile(const SosProgram& prog);

/// Reconstructs decision values from a solved SDP and validates every Gram
/// witness against the tolerances. Throws CertificateError (carrying the
/// offending residual) on mismatch, SosError if the solution status is not
/// optimal.
Certificate extract_certificate(const SosProgram& prog, const CompiledSos& compiled,
                                const SdpSolution& sol, const SosTolerances& tol = {});

enum class SosVerdict { is_sos, not_sos, inconclusive };

struct SosCheck {
  SosVerdict verdict = SosVerdict::inconclusive;
  SdpStatus solver_status = SdpStatus::numerical_failure;
  std::optional<GramCertificate> gram;
};

/// Feasibility check "p is SOS" for a concrete polynomial.
SosCheck check_sos(const Polynomial& p, const SdpOptions& opts = {},
                   const SosTolerances& tol = {});

}  // namespace ltac
