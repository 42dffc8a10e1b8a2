// fock.hpp - twisted Bargmann transform and twisted Fock-space geometry.
//
//   B_lam f(zeta) = c_lam p_1^lam(zeta)^{-1} (f *_lam p_{1/2}^lam)(zeta),
//     the twisted convolution holomorphically extended:
//     (f *_lam p)(zeta) = Int f(b) p(zeta - b) e^{-i(lam/2)[zeta, b]} db.
//   w_lam(zeta) = c_lam e^{-(lam/2) coth(lam) |zeta|^2} e^{lam [Re zeta, Im zeta]}
//   <F,G>       = 4^n Int F conj(G) w_lam dzeta.
//
// The 4^n factor normalizes the Lebesgue measure on C^{2n} so that B_lam is
// unitary under this convention sheet; with it the reproducing-kernel
// constant d_n calibrates to 1. d_n itself always comes from the registry.
#pragma once

#include <cstdint>
#include <optional>

#include "ttfa/twisted_ops.hpp"

namespace ttfa {

double weight_w_lambda(const TwistParameter& tw, const VecXc& zeta);

struct FockField {
  TwistParameter tw;
  BoxGrid xi_grid, eta_grid;  // zeta = xi + i eta over the product lattice
  std::vector<cplx> values;   // xi-major, same layout as PhaseField
  std::vector<std::uint8_t> flags;  // nonzero: outside the validity region
  SampledField source;        // generating real-side field (for re-evaluation)
  bool source_valid = true;

  std::size_t n_xi() const { return xi_grid.size(); }
  std::size_t n_eta() const { return eta_grid.size(); }
  cplx& at(std::size_t i, std::size_t j) { return values[i * n_eta() + j]; }
  cplx at(std::size_t i, std::size_t j) const { return values[i * n_eta() + j]; }
  VecXc zeta_at(std::size_t xi_flat, std::size_t eta_flat) const;
};

// B_lam f at arbitrary points of C^{2n} (exact to quadrature).
std::vector<cplx> bargmann_at(const TwistParameter& tw, const SampledField& f,
                              const std::vector<VecXc>& zeta_points);

// B_lam f(zeta) sqrt(w_lam(zeta)) with all exponents combined and log-scaled:
// usable at strongly sheared nodes where B and sqrt(w) separately over/underflow.
std::vector<cplx> weighted_bargmann_at(const TwistParameter& tw, const SampledField& f,
                                       const std::vector<VecXc>& zeta_points);

// conj-pairing kernel K_zeta(zeta') sqrt(w_lam(zeta')), same scaling concern.
cplx reproducing_kernel_weighted(const TwistParameter& tw, const VecXc& zeta,
                                 const VecXc& zeta_prime, double d_n);

FockField bargmann_transform(const TwistParameter& tw, const SampledField& f,
                             const BoxGrid& xi_grid, const BoxGrid& eta_grid);

cplx fock_inner(const FockField& F, const FockField& G);
double fock_norm(const FockField& F);

// K_zeta(zeta') = d_n c_lam e^{(lam/2) coth(lam) (conj(zeta).zeta')}
//                 e^{i (lam/2) [conj(zeta), zeta']}
cplx reproducing_kernel(const TwistParameter& tw, const VecXc& zeta, const VecXc& zeta_prime,
                        double d_n);

// <B_lam f, K_zeta> evaluated by lattice quadrature (the reproducing pairing).
cplx fock_pair_with_kernel(const FockField& F, const VecXc& zeta, double d_n);

// U_lam f = c(lam)^n fhat(c(lam) .): spectral evaluation on the dilated dual
// grid, band-limited (out-of-band targets are zero; a coverage check rejects
// inputs with spectral mass at the band edge). adjoint = true applies U_lam^*.
SampledField u_lambda_apply(const TwistParameter& tw, const SampledField& f, bool adjoint = false,
                            double coverage_tol = 1e-9);

// U F(zeta) = F(-i zeta): exact index permutation; requires xi and eta grids
// equal. Negation on the centered [-L, L) lattice wraps the k = 0 edge row to
// the opposite edge; everywhere else the permutation is exact. The generating
// field transforms by U_lam.
FockField fock_rotate(const FockField& F);

// rho_lam(zeta0) acting on F = B_lam f by analytic re-evaluation at the
// shifted lattice (never interpolates).
FockField rho_apply(const TwistParameter& tw, const VecXc& zeta0, const FockField& F);

// Ladder operators of the Bargmann calculus: A_j = d/dx_j - a x_j,
// B_j = -d/du_j + a u_j with a = (lam/2)coth(lam/2), b = i lam/2;
// P_j = -(a^2+b^2)^{-1}(a A_j - b B_j), Q_j = (a^2+b^2)^{-1}(b A_j + a B_j).
// Derivatives are 4th-order central differences at the grid spacing.
enum class LadderOp { A, B, P, Q };
SampledField ladder_apply(const TwistParameter& tw, int j, LadderOp which, const SampledField& f);

}  // namespace ttfa
