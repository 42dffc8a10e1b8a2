#include "ttfa/twist.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace ttfa {

namespace {
constexpr double kSeriesThreshold = 1e-4;
}

double x_coth_x(double x) {
  if (std::abs(x) < kSeriesThreshold) {
    const double x2 = x * x;
    return 1.0 + x2 / 3.0 - x2 * x2 / 45.0;
  }
  return x / std::tanh(x);
}

double x_over_sinh_x(double x) {
  if (std::abs(x) < kSeriesThreshold) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0;
  }
  return x / std::sinh(x);
}

TwistParameter::TwistParameter(double lambda, int half_dim) : lam(lambda), n(half_dim) {
  if (n <= 0) throw ttfa_error("TwistParameter: n must be positive");
  lam_coth_lam = x_coth_x(lam);
  lam_over_sinh = x_over_sinh_x(lam);
  c_half = x_coth_x(0.5 * lam);
  tanh_half = std::tanh(0.5 * lam);
  c_lam = std::pow(lam_over_sinh / (4.0 * kPi), n);
  if (!(c_lam > 0.0)) throw ttfa_error("TwistParameter: c_lambda not positive");
  if (!(c_half >= 1.0)) throw ttfa_error("TwistParameter: c(lambda) < 1");
}

double symplectic_form(const VecXd& xi, const VecXd& eta) {
  const Eigen::Index n = xi.size() / 2;
  // [(x,u),(y,v)] = u.y - v.x
  return xi.tail(n).dot(eta.head(n)) - eta.tail(n).dot(xi.head(n));
}

cplx symplectic_form_c(const VecXc& a, const VecXc& b) {
  const Eigen::Index n = a.size() / 2;
  // bilinear: [(z,w),(z',w')] = w.z' - z.w' (no conjugation)
  const cplx first = (a.tail(n).array() * b.head(n).array()).sum();
  const cplx second = (a.head(n).array() * b.tail(n).array()).sum();
  return first - second;
}

VecXd apply_j(const VecXd& v) {
  const Eigen::Index n = v.size() / 2;
  VecXd out(v.size());
  out.head(n) = v.tail(n);
  out.tail(n) = -v.head(n);
  return out;
}

VecXc apply_j(const VecXc& v) {
  const Eigen::Index n = v.size() / 2;
  VecXc out(v.size());
  out.head(n) = v.tail(n);
  out.tail(n) = -v.head(n);
  return out;
}

Eigen::MatrixXd j_matrix(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  j.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  return j;
}

Eigen::MatrixXd build_theta_lambda(const TwistParameter& tw) {
  if (tw.lam == 0.0) throw ttfa_error("build_theta_lambda: degenerate twist");
  const int m = 2 * tw.n;
  const Eigen::MatrixXd j = j_matrix(tw.n);
  Eigen::MatrixXd theta(2 * m, 2 * m);
  // lam * J on the diagonal blocks, -(lam coth lam) I off-diagonal.
  theta.topLeftCorner(m, m) = tw.lam * j;
  theta.bottomRightCorner(m, m) = tw.lam * j;
  theta.topRightCorner(m, m) = -tw.lam_coth_lam * Eigen::MatrixXd::Identity(m, m);
  theta.bottomLeftCorner(m, m) = tw.lam_coth_lam * Eigen::MatrixXd::Identity(m, m);
  return theta;
}

Eigen::MatrixXd build_lambda_matrix(const TwistParameter& tw) {
  const int m = 2 * tw.n;
  const Eigen::MatrixXd j = j_matrix(tw.n);
  Eigen::MatrixXd lambda(2 * m, 2 * m);
  lambda.topLeftCorner(m, m) = Eigen::MatrixXd::Identity(m, m);
  lambda.topRightCorner(m, m) = tw.tanh_half * j;
  lambda.bottomLeftCorner(m, m) = 0.5 * tw.lam * j;
  lambda.bottomRightCorner(m, m) = -tw.c_half * Eigen::MatrixXd::Identity(m, m);
  return lambda;
}

double lambda_matrix_det_closed_form(const TwistParameter& tw) {
  return std::pow(tw.lam_over_sinh, 2 * tw.n);
}

void lambda_matrix_apply(const TwistParameter& tw, const VecXd& xi, const VecXd& eta,
                         VecXd& xi_out, VecXd& eta_out) {
  xi_out = xi + tw.tanh_half * apply_j(eta);
  eta_out = 0.5 * tw.lam * apply_j(xi) - tw.c_half * eta;
}

double lambda_matrix_sigma_min(const TwistParameter& tw) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(build_lambda_matrix(tw));
  return svd.singularValues().minCoeff();
}

GroupElementGn group_mul_gn(const GroupElementGn& g1, const GroupElementGn& g2) {
  if (g1.zeta.size() != g2.zeta.size()) throw ttfa_error("group_mul_gn: dimension mismatch");
  GroupElementGn out;
  out.zeta = g1.zeta + g2.zeta;
  const cplx dot = (g1.zeta.array() * g2.zeta.array().conjugate()).sum();
  const cplx sym = symplectic_form_c(g1.zeta, g2.zeta.conjugate());
  out.s = g1.s + g2.s + 0.5 * sym.real() + cplx{0.0, 0.5} * dot.imag();
  return out;
}

GroupElementGn group_inverse_gn(const GroupElementGn& g) {
  // (zeta,s)^{-1} = (-zeta, -s): the cocycle vanishes on (zeta, -zeta) since
  // Re[zeta, conj(-zeta)] = -Re[zeta, conj(zeta)] and Im(zeta . conj(zeta)) = 0;
  // [zeta, conj(zeta)] is purely imaginary.
  GroupElementGn out;
  out.zeta = -g.zeta;
  out.s = -g.s;
  return out;
}

GroupElementTwistedH group_mul_twisted(const GroupElementTwistedH& g1,
                                       const GroupElementTwistedH& g2) {
  if (g1.lam.lam != g2.lam.lam || g1.lam.n != g2.lam.n)
    throw ttfa_error("group_mul_twisted: lambda mismatch");
  if (g1.zeta.size() != g2.zeta.size()) throw ttfa_error("group_mul_twisted: dimension mismatch");
  GroupElementTwistedH out;
  out.lam = g1.lam;
  out.zeta = g1.zeta + g2.zeta;
  const cplx dot = (g1.zeta.array() * g2.zeta.array().conjugate()).sum();
  const cplx sym = symplectic_form_c(g1.zeta, g2.zeta.conjugate());
  // t + t' + (lam/2) coth(lam) Im(zeta.conj(zeta')) - (lam/2) Re[zeta,conj(zeta')];
  // at lam = 0 the first coefficient tends to 1/2 (the H^{2n} law).
  out.t = g1.t + g2.t + 0.5 * g1.lam.lam_coth_lam * dot.imag() - 0.5 * g1.lam.lam * sym.real();
  return out;
}

double twisted_central_mackey(const GroupElementTwistedH& g1, const GroupElementTwistedH& g2) {
  const Eigen::MatrixXd theta = build_theta_lambda(g1.lam);
  const Eigen::Index m = g1.zeta.size();
  VecXd v1(2 * m), v2(2 * m);
  v1 << g1.zeta.real(), g1.zeta.imag();
  v2 << g2.zeta.real(), g2.zeta.imag();
  return g1.t + g2.t + 0.5 * v1.dot(theta * v2);
}

HeisenbergGroupElement heisenberg_group_mul(const HeisenbergGroupElement& g1,
                                            const HeisenbergGroupElement& g2) {
  HeisenbergGroupElement out;
  out.xi = g1.xi + g2.xi;
  out.t = g1.t + g2.t + 0.5 * symplectic_form(g1.xi, g2.xi);
  return out;
}

double heat_kernel_rate(const TwistParameter& tw, double t) {
  if (!(t > 0.0)) throw ttfa_error("heat_kernel: t must be positive");
  return 0.25 * x_coth_x(t * tw.lam) / t;
}

double heat_kernel_prefactor(const TwistParameter& tw, double t) {
  if (!(t > 0.0)) throw ttfa_error("heat_kernel: t must be positive");
  // (4 pi)^{-n} lam^n sinh(t lam)^{-n} = (4 pi t)^{-n} (t lam / sinh(t lam))^n
  return std::pow(x_over_sinh_x(t * tw.lam) / (4.0 * kPi * t), tw.n);
}

cplx heat_kernel_special_hermite(const TwistParameter& tw, double t, const VecXc& z) {
  const double rate = heat_kernel_rate(tw, t);
  const cplx zz = (z.array() * z.array()).sum();  // holomorphic: no conjugation
  return heat_kernel_prefactor(tw, t) * std::exp(-rate * zz);
}

double heat_kernel_special_hermite(const TwistParameter& tw, double t, const VecXd& z) {
  return heat_kernel_prefactor(tw, t) * std::exp(-heat_kernel_rate(tw, t) * z.squaredNorm());
}

SampledField heat_kernel_field(const TwistParameter& tw, double t, const BoxGrid& grid) {
  if (grid.dim() != 2 * tw.n) throw ttfa_error("heat_kernel_field: grid must be 2n-dimensional");
  const double rate = heat_kernel_rate(tw, t);
  const double pref = heat_kernel_prefactor(tw, t);
  SampledField f(grid);
  f.fill([&](std::span<const double> x) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    return cplx{pref * std::exp(-rate * r2), 0.0};
  });
  return f;
}

}  // namespace ttfa
