// heisenberg.hpp - H^n-level machinery: central spectral decomposition,
// the lifted representation Pi(zeta,s), Heisenberg modulations, the T
// multiplier, V / Vtilde, K_lambda, M^{p,q}(H^n) norms, B_H and the duality
// bracket.
//
// Central transform conventions: f^lam(xi) = Int f(xi,t) e^{i lam t} dt on the
// DFT-dual lambda grid lam_k = pi k / T (no (2pi)^{-1/2} here), recomposition
// f(xi,t) = (2pi)^{-1} Int f^lam(xi) e^{-i lam t} dlam; the pair inverts
// exactly on the grid. V_lambda f(zeta) = B_lam f^lam(zeta) sqrt(w_lam(zeta)).
#pragma once

#include "ttfa/modspace.hpp"

namespace ttfa {

struct HeisenbergField {
  BoxGrid base_grid;  // R^{2n}
  BoxGrid t_grid;     // 1-D, N_t a power of two
  std::vector<cplx> values;  // base-major, t fastest

  HeisenbergField() = default;
  HeisenbergField(BoxGrid base, BoxGrid t);
  int half_dim() const { return base_grid.dim() / 2; }
  std::size_t n_base() const { return base_grid.size(); }
  int n_t() const { return t_grid.npts[0]; }
  cplx& at(std::size_t base_flat, int t_idx) { return values[base_flat * n_t() + t_idx]; }
  cplx at(std::size_t base_flat, int t_idx) const { return values[base_flat * n_t() + t_idx]; }

  template <typename F>
  void fill(F&& fn) {
    const int d = base_grid.dim();
    std::vector<double> x(d);
    for (std::size_t b = 0; b < n_base(); ++b) {
      base_grid.point(b, x);
      for (int j = 0; j < n_t(); ++j)
        values[b * n_t() + j] = fn(std::span<const double>(x), t_grid.coord(0, j));
    }
  }
};

double h_l2_norm(const HeisenbergField& f);
cplx h_inner(const HeisenbergField& f, const HeisenbergField& g);

struct LambdaStack {
  BoxGrid base_grid;
  BoxGrid t_grid;
  std::vector<double> lam_grid;  // ascending, lam_k = pi k / T
  std::vector<SampledField> slices;
  double dlam() const { return lam_grid.size() > 1 ? lam_grid[1] - lam_grid[0] : 0.0; }
};

LambdaStack central_inverse_ft(const HeisenbergField& f);
HeisenbergField central_ft(const LambdaStack& s);

HeisenbergField big_pi_apply(const VecXc& zeta, double s, const HeisenbergField& f);
HeisenbergField heisenberg_modulate(const VecXd& eta, double s, const HeisenbergField& f);
// coverage_tol bounds the field-relative spectral mass the band-limited
// slicewise U_lambda evaluation may discard at the extreme lambda slices.
HeisenbergField u_tilde_apply(const HeisenbergField& f, bool adjoint = false,
                              double coverage_tol = 1e-7);
HeisenbergField t_multiplier_apply(const HeisenbergField& f);

// Heat kernels: p_t (sublaplacian) has slices p_t^{lam_k}; the full-Laplacian
// variant h_t carries the paper's extra e^{-lam^2/2} damping (stated there
// without t-dependence; used at t = 1/2).
LambdaStack heat_kernel_stack(const BoxGrid& base, const BoxGrid& t_grid, double t,
                              bool full_laplacian);
HeisenbergField heat_kernel_sublaplacian(const BoxGrid& base, const BoxGrid& t_grid, double t,
                                         bool full_laplacian = false);

// V_lambda f over a shared product phase lattice, one slice per lam_k.
// Slices whose L^2 mass falls below slice_rel_cut * max are left empty.
struct VStack {
  std::vector<double> lam_grid;
  double dlam = 0.0;
  BoxGrid xi_grid, eta_grid;
  std::vector<std::vector<cplx>> slices;  // xi-major values; empty => skipped
};
VStack v_transform(const HeisenbergField& f, const BoxGrid& xi_grid, const BoxGrid& eta_grid,
                   StftMode mode = StftMode::fast, double slice_rel_cut = 0.0);
HeisenbergField v_adjoint(const VStack& F, const BoxGrid& base_grid, const BoxGrid& t_grid);

// V_lambda f over per-slice lambda-adapted sheared meshes: mass-complete for
// every slice, immune to the support shear of large lambda.
struct VShearedStack {
  std::vector<double> lam_grid;
  double dlam = 0.0;
  std::vector<ShearedMesh> meshes;        // x_grid empty => slice skipped
  std::vector<std::vector<cplx>> slices;  // x-major mesh layout
};
VShearedStack v_transform_sheared(const HeisenbergField& f, StftMode mode = StftMode::fast,
                                  double slice_rel_cut = 1e-8);
// Same, but on externally supplied per-slice meshes (shared-mesh pairings).
VShearedStack v_transform_sheared(const HeisenbergField& f,
                                  const std::vector<ShearedMesh>& meshes, StftMode mode);
HeisenbergField v_adjoint_sheared(const VShearedStack& F, const BoxGrid& base_grid,
                                  const BoxGrid& t_grid);

// Mass-complete per-slice norms ||V_lambda f||_2^2.
std::vector<double> v_slice_l2_sq(const HeisenbergField& f, StftMode mode = StftMode::fast,
                                  double slice_rel_cut = 1e-12);

double k_lambda_kernel(const TwistParameter& tw, const VecXd& xi, const VecXd& eta);
// Honest quadrature of Int K_lambda over R^{4n} on adapted boxes (block
// separable, so it reduces to 2-D quadratures per coordinate pair).
double k_lambda_mass_quadrature(const TwistParameter& tw);
// ||K_lambda||_{r,s} by quadrature and the closed-form lambda-shape
// (lam/sinh lam)^{2n(1-1/s)} (lam coth lam)^{n(1/s - 1/r)} it must follow.
double k_lambda_mixed_norm_quadrature(const TwistParameter& tw, double r, double s);
double k_lambda_mixed_norm_shape(const TwistParameter& tw, double r, double s);

// || f ||_{(p,q)}^2 = Int || V_lambda f ||_{p,q}^2 dlam, per-slice mixed norms
// on the given product lattice.
double m_pq_heisenberg_norm(const HeisenbergField& f, const MixedNormSpec& spec,
                            const BoxGrid& xi_grid, const BoxGrid& eta_grid,
                            StftMode mode = StftMode::fast);
// Pointwise l^2-in-lambda first, then the mixed norm (the M_1 variant).
double m1_norm(const HeisenbergField& f, const MixedNormSpec& spec, const BoxGrid& xi_grid,
               const BoxGrid& eta_grid, StftMode mode = StftMode::fast);

// B_H f(zeta, s) = e^{s^2/4} (2pi)^{-1} Int e^{-i lam s} e^{-lam^2/2}
//                  V_lambda f(zeta) dlam, entire in s.
std::vector<cplx> bargmann_heisenberg(const HeisenbergField& f, const VecXc& zeta,
                                      const std::vector<cplx>& s_points,
                                      StftMode mode = StftMode::fast);

// <f,g>_0 = Int <V_lambda f, V_lambda g>_{phase} dlam on a common lattice.
cplx dual_bracket(const HeisenbergField& f, const HeisenbergField& g, const BoxGrid& xi_grid,
                  const BoxGrid& eta_grid, StftMode mode = StftMode::fast);

// Serialization: manifest {base_grid, t_grid, lam_grid} + one raw binary of
// concatenated slice payloads.
void save_stack(const LambdaStack& s, const std::string& manifest_path);
LambdaStack load_stack(const std::string& manifest_path);

}  // namespace ttfa
