#pragma once

#include "ltac/polynomial.hpp"

namespace ltac {

/// Controlled polynomial dynamics
///
///   x' = f(x) + G(x) u + H(x) u'
///
/// together with the cost pieces of the expensive-control objective
/// phi0(x) + u^T Psi(x) u / eps. H may be identically zero, in which case
/// the u' term is absent. All entries live over the n state variables.
struct PolySystem {
  int n = 0;  // state dimension
  int m = 0;  // control dimension
  PolyVector f;    // n
  PolyMatrix G;    // n x m
  PolyMatrix H;    // n x m, may be all-zero
  Polynomial phi0;
  PolyMatrix psi;  // m x m, symmetric, positive definite at the origin

  bool has_h() const { return !H.is_zero(); }

  /// Checks shapes, uniform variable counts, psi symmetry and numeric
  /// positive-definiteness of psi at the origin. Throws PolyError.
  void validate() const;

  /// Autonomous system (m = 0 slots kept for shape consistency).
  static PolySystem autonomous(PolyVector f, Polynomial phi0);

  /// Convenience builder with G given, H zero and psi identity.
  static PolySystem with_identity_psi(PolyVector f, PolyMatrix G, Polynomial phi0);
};

/// Closed-loop drift f(x) + G(x) u(x) for a polynomial state feedback u.
/// The H u' channel is handled by the simulation layer, not here.
PolyVector substitute_controls(const PolySystem& sys, const PolyVector& u);

}  // namespace ltac
