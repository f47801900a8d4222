#include "ltac/poly_system.hpp"

#include <Eigen/Dense>

namespace ltac {

void PolySystem::validate() const {
  if (n <= 0) throw PolyError("PolySystem: state dimension must be positive");
  if (m < 0) throw PolyError("PolySystem: negative control dimension");
  if (f.size() != n || f.nvars() != n) throw PolyError("PolySystem: f must be n polynomials in n variables");
  if (G.rows() != n || G.cols() != m) throw PolyError("PolySystem: G shape mismatch");
  if (H.rows() != n || H.cols() != m) throw PolyError("PolySystem: H shape mismatch");
  if (phi0.nvars() != n) throw PolyError("PolySystem: phi0 variable count mismatch");
  if (psi.rows() != m || psi.cols() != m) throw PolyError("PolySystem: psi shape mismatch");
  if (m > 0) {
    if (G.nvars() != n || H.nvars() != n || psi.nvars() != n)
      throw PolyError("PolySystem: control terms must use the state variables");
    if (!psi.is_symmetric()) throw PolyError("PolySystem: psi must be symmetric");
    std::vector<double> origin(n, 0.0);
    Eigen::MatrixXd psi0(m, m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) psi0(r, c) = psi(r, c).evaluate(origin);
    Eigen::LLT<Eigen::MatrixXd> llt(psi0);
    if (llt.info() != Eigen::Success)
      throw PolyError("PolySystem: psi is not positive definite at the origin");
  }
}

PolySystem PolySystem::autonomous(PolyVector f, Polynomial phi0) {
  PolySystem sys;
  sys.n = f.size();
  sys.m = 0;
  sys.G = PolyMatrix(sys.n, sys.n, 0);
  sys.H = PolyMatrix(sys.n, sys.n, 0);
  sys.psi = PolyMatrix(sys.n, 0, 0);
  sys.f = std::move(f);
  sys.phi0 = std::move(phi0);
  sys.validate();
  return sys;
}

PolySystem PolySystem::with_identity_psi(PolyVector f, PolyMatrix G, Polynomial phi0) {
  PolySystem sys;
  sys.n = f.size();
  sys.m = G.cols();
  sys.f = std::move(f);
  sys.G = std::move(G);
  sys.H = PolyMatrix(sys.n, sys.n, sys.m);
  sys.phi0 = std::move(phi0);
  sys.psi = PolyMatrix(sys.n, sys.m, sys.m);
  for (int i = 0; i < sys.m; ++i) sys.psi(i, i) = Polynomial::constant(sys.n, 1.0);
  sys.validate();
  return sys;
}

PolyVector substitute_controls(const PolySystem& sys, const PolyVector& u) {
  if (u.size() != sys.m || u.nvars() != sys.n)
    throw PolyError("substitute_controls: control vector shape mismatch");
  if (sys.m == 0) return sys.f;
  PolyVector gu = sys.G.apply(u);
  PolyVector out(sys.n, sys.n);
  for (int i = 0; i < sys.n; ++i) out[i] = sys.f[i] + gu[i];
  return out;
}

}  // namespace ltac
