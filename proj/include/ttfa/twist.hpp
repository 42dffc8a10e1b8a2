// twist.hpp - lambda-dependent constants, symplectic structure, group laws,
// the Lambda and Theta_lambda matrices, and the special Hermite heat kernel.
//
// Sign conventions (fixed globally, see common.hpp):
//   [(x,u),(y,v)] = u.y - v.x,  [zeta,zeta'] = w.z' - z.w' for zeta=(z,w),
//   J = [[0,I],[-I,0]],  [xi,eta] = (J xi).eta.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ttfa/grid.hpp"

namespace ttfa {

// x*coth(x) with the removable singularity at 0 handled by series.
double x_coth_x(double x);
// x/sinh(x), likewise.
double x_over_sinh_x(double x);

// lambda with its safely evaluated derived constants. All values are finite
// for every real lambda including 0.
struct TwistParameter {
  double lam = 0.0;
  int n = 1;
  double c_lam = 0.0;         // (4 pi)^{-n} (lam / sinh lam)^n
  double c_half = 1.0;        // c(lambda) = (lam/2) coth(lam/2), >= 1 always
  double tanh_half = 0.0;     // tanh(lam/2)
  double lam_coth_lam = 1.0;  // lam * coth(lam), -> 1 at 0
  double lam_over_sinh = 1.0; // lam / sinh(lam), -> 1 at 0

  TwistParameter() = default;
  TwistParameter(double lambda, int half_dim);

  // coth(lam); diverges at lam = 0, callers must only use it multiplied by lam.
  double coth_lam() const { return lam_coth_lam / lam; }
};

// Complex-coordinate view of a real phase point: zeta = xi + i eta.
using VecXd = Eigen::VectorXd;
using VecXc = Eigen::VectorXcd;

// Symplectic form and complex-bilinear extension.
double symplectic_form(const VecXd& xi, const VecXd& eta);
cplx symplectic_form_c(const VecXc& a, const VecXc& b);
// J applied to a 2n-vector: J(x,u) = (u,-x).
VecXd apply_j(const VecXd& v);
VecXc apply_j(const VecXc& v);
Eigen::MatrixXd j_matrix(int n);

// Theta_lambda = lam [[J, -coth(lam) I],[coth(lam) I, J]] (4n x 4n); lam != 0.
Eigen::MatrixXd build_theta_lambda(const TwistParameter& tw);

// Lambda = [[I, tanh(lam/2) J],[(lam/2) J, -(lam/2)coth(lam/2) I]].
Eigen::MatrixXd build_lambda_matrix(const TwistParameter& tw);
double lambda_matrix_det_closed_form(const TwistParameter& tw);
// (xi', eta') = Lambda (xi, eta).
void lambda_matrix_apply(const TwistParameter& tw, const VecXd& xi, const VecXd& eta,
                         VecXd& xi_out, VecXd& eta_out);
// Smallest singular value of Lambda; sets the Lambda-adapted lattice extents.
double lambda_matrix_sigma_min(const TwistParameter& tw);

// Group G_n on C^{2n} x C.
struct GroupElementGn {
  VecXc zeta;
  cplx s{0.0, 0.0};
};
GroupElementGn group_mul_gn(const GroupElementGn& g1, const GroupElementGn& g2);
GroupElementGn group_inverse_gn(const GroupElementGn& g);

// Twisted Heisenberg group H^n_lambda(C) on C^{2n} x R.
struct GroupElementTwistedH {
  VecXc zeta;
  double t = 0.0;
  TwistParameter lam;
};
GroupElementTwistedH group_mul_twisted(const GroupElementTwistedH& g1,
                                       const GroupElementTwistedH& g2);
// Central part via the Mackey form t + t' + (1/2) <(xi,eta), Theta (xi',eta')>.
double twisted_central_mackey(const GroupElementTwistedH& g1, const GroupElementTwistedH& g2);

// Heisenberg group H^n on R^{2n} x R.
struct HeisenbergGroupElement {
  VecXd xi;
  double t = 0.0;
};
HeisenbergGroupElement heisenberg_group_mul(const HeisenbergGroupElement& g1,
                                            const HeisenbergGroupElement& g2);

// Special Hermite heat kernel p_t^lambda at a (possibly complex) point of
// C^{2n}; the holomorphic extension replaces |z|^2 by sum z_j^2.
cplx heat_kernel_special_hermite(const TwistParameter& tw, double t, const VecXc& z);
// Real-argument fast path.
double heat_kernel_special_hermite(const TwistParameter& tw, double t, const VecXd& z);
// Gaussian decay rate of p_t^lambda: value is prefactor(tw,t) * exp(-rate*|z|^2).
double heat_kernel_rate(const TwistParameter& tw, double t);
double heat_kernel_prefactor(const TwistParameter& tw, double t);

// Samples p_{t}^{lambda} on a 2n-dim grid.
SampledField heat_kernel_field(const TwistParameter& tw, double t, const BoxGrid& grid);

}  // namespace ttfa
