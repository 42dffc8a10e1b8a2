// modspace.hpp - twisted STFT, synthesis, M_lambda^{p,q} norms and the
// window-independence / inclusion / algebra checks.
//
// Core identity (verified in tests, used by the fast paths): with
// (xi', eta') = Lambda(xi, eta),
//   e_lam(eta) tau_lam(xi) g (b) = g(b - xi') e^{i b.eta'}
//                                  e^{-i (lam/2) tanh(lam/2) (xi.eta)},
// so V_g^lam f(xi,eta) = e^{+i(lam/2)tanh(lam/2)(xi.eta)} V^cl_g f(xi',eta').
//
// Lattice policy: the desk-scale default is a rectangular product lattice;
// global (mass-complete) quadratures additionally use Lambda-sheared meshes
// whose nodes are Lambda^{-1} images of a rectangular lattice in the
// classical frame, where V^cl has O(1) decay for every lambda.
#pragma once

#include "ttfa/fock.hpp"
#include "ttfa/interp.hpp"
#include "ttfa/quad.hpp"

namespace ttfa {

// Analyzing window: sampled field plus (optionally) its separable Gaussian
// description A exp(-sum alpha_a (b_a - mu_a)^2), which the fast evaluation
// paths require.
struct Window {
  SampledField samples;
  bool has_gaussian = false;
  double amp = 1.0;
  std::vector<double> alpha, mu;

  static Window gaussian(const BoxGrid& grid, double amp, std::vector<double> alpha,
                         std::vector<double> mu);
  static Window heat_half(const TwistParameter& tw, const BoxGrid& grid);  // p_{1/2}^lambda
  static Window sampled(SampledField f);
  // Window value at an arbitrary point (Gaussian windows only).
  cplx eval(std::span<const double> x) const;
};

enum class StftMode {
  direct,      // operator composition per node (the definitional oracle)
  quadrature,  // per-node closed-form kernel quadrature (O(N) per node)
  fast         // separable chirp-table contraction (no transcendentals in loops)
};

// Lambda-adapted rectangular lattice: extent grows like 1/sigma_min(Lambda)
// (capped) so the twisted STFT's support tube stays inside the box.
std::pair<BoxGrid, BoxGrid> adapted_phase_lattice(const TwistParameter& tw, int base_npts,
                                                  double base_halfw, double cap_halfw = 16.0);

PhaseField twisted_stft(const TwistParameter& tw, const SampledField& f, const Window& g,
                        const BoxGrid& xi_grid, const BoxGrid& eta_grid, StftMode mode);

// V_g^lam f at an arbitrary list of (xi, eta) nodes.
std::vector<cplx> twisted_stft_at(const TwistParameter& tw, const SampledField& f, const Window& g,
                                  const std::vector<std::pair<VecXd, VecXd>>& nodes, StftMode mode);

// Synthesis Vtilde_g F = Int F(xi,eta) e_lam(eta) tau_lam(xi) g  dxi deta.
SampledField twisted_stft_adjoint(const TwistParameter& tw, const PhaseField& F, const Window& g);

// Lambda-sheared quadrature mesh: nodes (xi,eta) = Lambda^{-1}(x_i, y_j).
struct ShearedMesh {
  TwistParameter tw;
  BoxGrid x_grid, y_grid;
  Eigen::MatrixXd lambda_inv;
  double node_weight = 0.0;  // |det Lambda|^{-1} dx dy

  std::size_t size() const { return x_grid.size() * y_grid.size(); }
  std::pair<VecXd, VecXd> node(std::size_t x_flat, std::size_t y_flat) const;
};
ShearedMesh make_sheared_mesh(const TwistParameter& tw, const BoxGrid& x_grid,
                              const BoxGrid& y_grid);
// Classical-frame box sized from the second moments of f and the window.
ShearedMesh default_sheared_mesh(const TwistParameter& tw, const SampledField& f, const Window& g,
                                 int npts = 20, double radius_sigmas = 6.5);

// V_g^lam f over the mesh (x-major layout).
std::vector<cplx> twisted_stft_on_mesh(const TwistParameter& tw, const SampledField& f,
                                       const Window& g, const ShearedMesh& mesh, StftMode mode);
SampledField stft_synthesis_on_mesh(const TwistParameter& tw, const ShearedMesh& mesh,
                                    const std::vector<cplx>& coef, const Window& g,
                                    const BoxGrid& out_grid);
// sum |coef|^2 * node_weight (the L^2 mass captured by the mesh).
double mesh_l2_sq(const ShearedMesh& mesh, const std::vector<cplx>& coef);

// Fock-space quadratures over a sheared mesh driven by the direct (weighted)
// Bargmann evaluator; the 4^n measure normalization is included.
std::vector<VecXc> mesh_zeta_nodes(const ShearedMesh& mesh);
double fock_mass_on_mesh(const TwistParameter& tw, const SampledField& f, const ShearedMesh& mesh);
cplx fock_inner_on_mesh(const TwistParameter& tw, const SampledField& f, const SampledField& g,
                        const ShearedMesh& mesh);
// <B_lam f, K_zeta>_F, the reproducing pairing.
cplx fock_kernel_pair_on_mesh(const TwistParameter& tw, const SampledField& f,
                              const ShearedMesh& mesh, const VecXc& zeta, double d_n);

double m_lambda_norm(const TwistParameter& tw, const SampledField& f, const Window& g,
                     const MixedNormSpec& spec, const BoxGrid& xi_grid, const BoxGrid& eta_grid,
                     StftMode mode = StftMode::fast);

struct WindowEquivalenceReport {
  double ratio = 0.0;  // ||V_{g'} f|| / ||V_g f||
  double bound = 0.0;  // c_lam^2 ||V_g g'||_{1,1} / (d_n ||g||_2^2)
  bool pass = false;
};
WindowEquivalenceReport window_equivalence_ratio(const TwistParameter& tw, const SampledField& f,
                                                 const Window& g, const Window& gprime,
                                                 const MixedNormSpec& spec, const BoxGrid& xi_grid,
                                                 const BoxGrid& eta_grid, double d_n);

struct InclusionReport {
  double lhs = 0.0;    // ||V_g f||_{p2,q2}
  double bound = 0.0;  // c_lam^2 <g,g>^{-1} d_n^{-1} ||V_g f||_{p1,q1} ||V_g g||_{r,s}
  double r = 0.0, s = 0.0;
  bool pass = false;
};
InclusionReport inclusion_check(const TwistParameter& tw, const SampledField& f, const Window& g,
                                const MixedNormSpec& spec1, const MixedNormSpec& spec2,
                                const BoxGrid& xi_grid, const BoxGrid& eta_grid, double d_n);

struct AlgebraReport {
  double young_lhs = 0.0, young_rhs = 0.0;  // ||f*g||_p vs C_p(lam) ||f||_p ||g||_p
  double young_constant = 1.0;              // (2 pi/|lam|)^{n(1-1/p)}
  double banach_lhs = 0.0, banach_rhs = 0.0;      // (p,p)-norm inequality with C_registry
  double factorization_sup = 0.0;                 // sup |<f*g, Pi h> - f_eta * G_eta|
  bool pass = false;
};
AlgebraReport twisted_algebra_check(const TwistParameter& tw, const SampledField& f,
                                    const SampledField& g, double p, const Window& h,
                                    const BoxGrid& xi_grid, const BoxGrid& eta_grid,
                                    double c_registry);

}  // namespace ttfa
