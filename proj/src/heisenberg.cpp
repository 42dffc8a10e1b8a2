#include "ttfa/heisenberg.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace ttfa {

namespace {

cplx cexp(cplx z) { return std::exp(z); }

// lam_k = pi k / T is exactly the dual grid of the t grid.
std::vector<double> make_lam_grid(const BoxGrid& t_grid) {
  const BoxGrid dual = t_grid.dual();
  std::vector<double> lam(dual.npts[0]);
  for (int k = 0; k < dual.npts[0]; ++k) lam[k] = dual.coord(0, k);
  return lam;
}

// Window p_{1/2}^lambda for slice work.
Window slice_window(const TwistParameter& tw, const BoxGrid& base) {
  return Window::heat_half(tw, base);
}

// V_lambda f^lam on a product lattice:
//   V_lambda(xi,eta) = sqrt(c_lam) e^{-i (lam/2) coth(lam) xi.eta}
//                      V^lam_{p_{1/2}}(f^lam)(xi,eta).
std::vector<cplx> v_slice_product(const TwistParameter& tw, const SampledField& fslice,
                                  const BoxGrid& xi_grid, const BoxGrid& eta_grid,
                                  StftMode mode) {
  const Window w = slice_window(tw, fslice.grid);
  PhaseField V = twisted_stft(tw, fslice, w, xi_grid, eta_grid, mode);
  const double root_c = std::sqrt(tw.c_lam);
  const std::size_t neta = eta_grid.size();
  const int d = xi_grid.dim();
  std::vector<double> x(d), e(d);
  for (std::size_t i = 0; i < xi_grid.size(); ++i) {
    xi_grid.point(i, x);
    for (std::size_t j = 0; j < neta; ++j) {
      eta_grid.point(j, e);
      double dot = 0.0;
      for (int a = 0; a < d; ++a) dot += x[a] * e[a];
      const double ph = -0.5 * tw.lam_coth_lam * dot;
      V.values[i * neta + j] *= root_c * cplx{std::cos(ph), std::sin(ph)};
    }
  }
  return std::move(V.values);
}

}  // namespace

HeisenbergField::HeisenbergField(BoxGrid base, BoxGrid t)
    : base_grid(std::move(base)), t_grid(std::move(t)) {
  if (t_grid.dim() != 1) throw ttfa_error("HeisenbergField: t grid must be 1-D");
  if (base_grid.dim() % 2 != 0) throw ttfa_error("HeisenbergField: base grid must be 2n-dim");
  values.assign(base_grid.size() * t_grid.size(), cplx{0.0, 0.0});
}

double h_l2_norm(const HeisenbergField& f) {
  std::vector<double> terms(f.values.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = std::norm(f.values[i]);
  return std::sqrt(pairwise_sum<double>(terms) * f.base_grid.cell_volume() *
                   f.t_grid.cell_volume());
}

cplx h_inner(const HeisenbergField& f, const HeisenbergField& g) {
  if (f.base_grid != g.base_grid || f.t_grid != g.t_grid)
    throw ttfa_error("h_inner: grid mismatch");
  std::vector<cplx> terms(f.values.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = f.values[i] * std::conj(g.values[i]);
  return pairwise_sum<cplx>(terms) * f.base_grid.cell_volume() * f.t_grid.cell_volume();
}

LambdaStack central_inverse_ft(const HeisenbergField& f) {
  LambdaStack s;
  s.base_grid = f.base_grid;
  s.t_grid = f.t_grid;
  s.lam_grid = make_lam_grid(f.t_grid);
  const int nt = f.n_t();
  const std::size_t nb = f.n_base();
  const double dt = f.t_grid.spacing(0);

  // sum_j f(t_j) e^{+i t_j lam_k} = (+1)-DFT with centered-grid phases.
  std::vector<cplx> work = f.values;
  for (std::size_t b = 0; b < nb; ++b)
    for (int j = 0; j < nt; ++j)
      if (j & 1) work[b * nt + j] = -work[b * nt + j];
  dft_last_axis(work, nb, nt, +1);

  s.slices.assign(nt, SampledField(f.base_grid));
  for (int m = 0; m < nt; ++m) {
    // corner phase i^{+nt} and (-1)^m, as in fourier_transform (sign = +1).
    cplx corner{0.0, 0.0};
    switch (((nt % 4) + 4) % 4) {
      case 0: corner = {1.0, 0.0}; break;
      case 1: corner = {0.0, 1.0}; break;
      case 2: corner = {-1.0, 0.0}; break;
      default: corner = {0.0, -1.0}; break;
    }
    const cplx factor = corner * ((m & 1) ? -dt : dt);
    for (std::size_t b = 0; b < nb; ++b) s.slices[m].values[b] = work[b * nt + m] * factor;
  }
  return s;
}

HeisenbergField central_ft(const LambdaStack& s) {
  HeisenbergField f(s.base_grid, s.t_grid);
  const int nt = s.t_grid.npts[0];
  const std::size_t nb = s.base_grid.size();
  const double scale = s.dlam() / (2.0 * kPi);

  std::vector<cplx> work(f.values.size(), cplx{0.0, 0.0});
  for (int m = 0; m < nt; ++m) {
    if (s.slices[m].values.empty()) continue;
    const double sgn = (m & 1) ? -1.0 : 1.0;
    for (std::size_t b = 0; b < nb; ++b) work[b * nt + m] = s.slices[m].values[b] * sgn;
  }
  dft_last_axis(work, nb, nt, -1);
  cplx corner{0.0, 0.0};
  switch (((nt % 4) + 4) % 4) {  // i^{-nt}
    case 0: corner = {1.0, 0.0}; break;
    case 1: corner = {0.0, -1.0}; break;
    case 2: corner = {-1.0, 0.0}; break;
    default: corner = {0.0, 1.0}; break;
  }
  for (std::size_t b = 0; b < nb; ++b)
    for (int j = 0; j < nt; ++j) {
      const double sgn = (j & 1) ? -1.0 : 1.0;
      f.values[b * nt + j] = work[b * nt + j] * corner * (sgn * scale);
    }
  return f;
}

HeisenbergField big_pi_apply(const VecXc& zeta, double s, const HeisenbergField& f) {
  const int n = f.half_dim();
  LambdaStack st = central_inverse_ft(f);
  for (std::size_t k = 0; k < st.slices.size(); ++k) {
    const TwistParameter tw(st.lam_grid[k], n);
    st.slices[k] = rep_pi_lambda_central(tw, zeta, s, st.slices[k]);
  }
  return central_ft(st);
}

HeisenbergField heisenberg_modulate(const VecXd& eta, double s, const HeisenbergField& f) {
  VecXc zeta(eta.size());
  for (Eigen::Index a = 0; a < eta.size(); ++a) zeta[a] = cplx{0.0, eta[a]};
  return big_pi_apply(zeta, s, f);
}

HeisenbergField u_tilde_apply(const HeisenbergField& f, bool adjoint, double coverage_tol) {
  const int n = f.half_dim();
  LambdaStack st = central_inverse_ft(f);
  double max_mass = 0.0;
  std::vector<double> mass(st.slices.size());
  for (std::size_t k = 0; k < st.slices.size(); ++k) {
    const double m = l2_norm(st.slices[k]);
    mass[k] = m * m;
    max_mass = std::max(max_mass, mass[k]);
  }
  for (std::size_t k = 0; k < st.slices.size(); ++k) {
    if (mass[k] <= 1e-24 * max_mass) {
      for (auto& v : st.slices[k].values) v = cplx{0.0, 0.0};
      continue;
    }
    const TwistParameter tw(st.lam_grid[k], n);
    // Slice-relative coverage: what matters is edge mass against the whole
    // field, not against a vanishing slice.
    const double tol_k = coverage_tol * max_mass / mass[k];
    st.slices[k] = u_lambda_apply(tw, st.slices[k], adjoint, tol_k);
  }
  return central_ft(st);
}

HeisenbergField t_multiplier_apply(const HeisenbergField& f) {
  const int n = f.half_dim();
  LambdaStack st = central_inverse_ft(f);
  for (std::size_t k = 0; k < st.slices.size(); ++k) {
    const TwistParameter tw(st.lam_grid[k], n);
    const double root_c = std::sqrt(tw.c_lam);
    for (auto& v : st.slices[k].values) v *= root_c;
  }
  return central_ft(st);
}

LambdaStack heat_kernel_stack(const BoxGrid& base, const BoxGrid& t_grid, double t,
                              bool full_laplacian) {
  if (!(t > 0.0)) throw ttfa_error("heat_kernel_stack: t must be positive");
  LambdaStack s;
  s.base_grid = base;
  s.t_grid = t_grid;
  s.lam_grid = make_lam_grid(t_grid);
  const int n = base.dim() / 2;
  s.slices.reserve(s.lam_grid.size());
  for (double lam : s.lam_grid) {
    const TwistParameter tw(lam, n);
    SampledField slice = heat_kernel_field(tw, t, base);
    if (full_laplacian) {
      const double damp = std::exp(-0.5 * lam * lam);
      for (auto& v : slice.values) v *= damp;
    }
    s.slices.push_back(std::move(slice));
  }
  return s;
}

HeisenbergField heat_kernel_sublaplacian(const BoxGrid& base, const BoxGrid& t_grid, double t,
                                         bool full_laplacian) {
  return central_ft(heat_kernel_stack(base, t_grid, t, full_laplacian));
}

VStack v_transform(const HeisenbergField& f, const BoxGrid& xi_grid, const BoxGrid& eta_grid,
                   StftMode mode, double slice_rel_cut) {
  const int n = f.half_dim();
  const LambdaStack st = central_inverse_ft(f);
  VStack V;
  V.lam_grid = st.lam_grid;
  V.dlam = st.dlam();
  V.xi_grid = xi_grid;
  V.eta_grid = eta_grid;
  V.slices.resize(st.slices.size());

  double max_mass = 0.0;
  std::vector<double> mass(st.slices.size());
  for (std::size_t k = 0; k < st.slices.size(); ++k) {
    const double m = l2_norm(st.slices[k]);
    mass[k] = m;
    max_mass = std::max(max_mass, m);
  }
  for (std::size_t k = 0; k < st.slices.size(); ++k) {
    if (mass[k] < slice_rel_cut * max_mass) continue;
    const TwistParameter tw(st.lam_grid[k], n);
    V.slices[k] = v_slice_product(tw, st.slices[k], xi_grid, eta_grid, mode);
  }
  return V;
}

HeisenbergField v_adjoint(const VStack& F, const BoxGrid& base_grid, const BoxGrid& t_grid) {
  const int n = base_grid.dim() / 2;
  LambdaStack st;
  st.base_grid = base_grid;
  st.t_grid = t_grid;
  st.lam_grid = F.lam_grid;
  st.slices.assign(F.lam_grid.size(), SampledField(base_grid));

  const std::size_t neta = F.eta_grid.size();
  const int d = base_grid.dim();
  for (std::size_t k = 0; k < F.lam_grid.size(); ++k) {
    if (F.slices[k].empty()) continue;
    const TwistParameter tw(F.lam_grid[k], n);
    // Synthesis kernel Psi_zeta = sqrt(c_lam) e^{+i(lam/2)coth(lam) xi.eta}
    //                             e_lam(eta) tau_lam(xi) p_{1/2}^lam.
    PhaseField coef(F.xi_grid, F.eta_grid);
    const double root_c = std::sqrt(tw.c_lam);
    std::vector<double> x(d), e(d);
    for (std::size_t i = 0; i < F.xi_grid.size(); ++i) {
      F.xi_grid.point(i, x);
      for (std::size_t j = 0; j < neta; ++j) {
        F.eta_grid.point(j, e);
        double dot = 0.0;
        for (int a = 0; a < d; ++a) dot += x[a] * e[a];
        const double ph = 0.5 * tw.lam_coth_lam * dot;
        coef.values[i * neta + j] =
            F.slices[k][i * neta + j] * root_c * cplx{std::cos(ph), std::sin(ph)};
      }
    }
    st.slices[k] = twisted_stft_adjoint(tw, coef, slice_window(tw, base_grid));
  }
  return central_ft(st);
}

namespace {

// V_lambda on one sheared mesh: sqrt(c_lam) e^{-i(lam/2)coth(lam) xi.eta} V^lam_p.
std::vector<cplx> v_slice_on_mesh(const TwistParameter& tw, const SampledField& fslice,
                                  const Window& w, const ShearedMesh& mesh, StftMode mode) {
  std::vector<cplx> vals = twisted_stft_on_mesh(tw, fslice, w, mesh, mode);
  const double root_c = std::sqrt(tw.c_lam);
  const std::size_t ny = mesh.y_grid.size();
  for (std::size_t i = 0; i < mesh.x_grid.size(); ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const auto [xi, eta] = mesh.node(i, j);
      const double ph = -0.5 * tw.lam_coth_lam * xi.dot(eta);
      vals[i * ny + j] *= root_c * cplx{std::cos(ph), std::sin(ph)};
    }
  return vals;
}

}  // namespace

VShearedStack v_transform_sheared(const HeisenbergField& f, StftMode mode, double slice_rel_cut) {
  const int n = f.half_dim();
  const LambdaStack st = central_inverse_ft(f);
  VShearedStack V;
  V.lam_grid = st.lam_grid;
  V.dlam = st.dlam();
  V.meshes.resize(st.slices.size());
  V.slices.resize(st.slices.size());

  double max_mass = 0.0;
  std::vector<double> mass(st.slices.size());
  for (std::size_t k = 0; k < st.slices.size(); ++k) {
    mass[k] = l2_norm(st.slices[k]);
    max_mass = std::max(max_mass, mass[k]);
  }
  for (std::size_t k = 0; k < st.slices.size(); ++k) {
    if (mass[k] < slice_rel_cut * max_mass || mass[k] == 0.0) continue;
    const TwistParameter tw(st.lam_grid[k], n);
    const Window w = slice_window(tw, f.base_grid);
    V.meshes[k] = default_sheared_mesh(tw, st.slices[k], w);
    V.slices[k] = v_slice_on_mesh(tw, st.slices[k], w, V.meshes[k], mode);
  }
  return V;
}

VShearedStack v_transform_sheared(const HeisenbergField& f,
                                  const std::vector<ShearedMesh>& meshes, StftMode mode) {
  const int n = f.half_dim();
  const LambdaStack st = central_inverse_ft(f);
  if (meshes.size() != st.slices.size())
    throw ttfa_error("v_transform_sheared: mesh count mismatch");
  VShearedStack V;
  V.lam_grid = st.lam_grid;
  V.dlam = st.dlam();
  V.meshes = meshes;
  V.slices.resize(st.slices.size());
  for (std::size_t k = 0; k < st.slices.size(); ++k) {
    if (meshes[k].x_grid.npts.empty()) continue;
    const TwistParameter tw(st.lam_grid[k], n);
    const Window w = slice_window(tw, f.base_grid);
    V.slices[k] = v_slice_on_mesh(tw, st.slices[k], w, meshes[k], mode);
  }
  return V;
}

HeisenbergField v_adjoint_sheared(const VShearedStack& F, const BoxGrid& base_grid,
                                  const BoxGrid& t_grid) {
  const int n = base_grid.dim() / 2;
  LambdaStack st;
  st.base_grid = base_grid;
  st.t_grid = t_grid;
  st.lam_grid = F.lam_grid;
  st.slices.assign(F.lam_grid.size(), SampledField(base_grid));
  for (std::size_t k = 0; k < F.lam_grid.size(); ++k) {
    if (F.slices[k].empty()) continue;
    const TwistParameter tw(F.lam_grid[k], n);
    const ShearedMesh& mesh = F.meshes[k];
    const std::size_t ny = mesh.y_grid.size();
    std::vector<cplx> coef = F.slices[k];
    const double root_c = std::sqrt(tw.c_lam);
    for (std::size_t i = 0; i < mesh.x_grid.size(); ++i)
      for (std::size_t j = 0; j < ny; ++j) {
        const auto [xi, eta] = mesh.node(i, j);
        const double ph = 0.5 * tw.lam_coth_lam * xi.dot(eta);
        coef[i * ny + j] *= root_c * cplx{std::cos(ph), std::sin(ph)};
      }
    st.slices[k] = stft_synthesis_on_mesh(tw, mesh, coef, slice_window(tw, base_grid), base_grid);
  }
  return central_ft(st);
}

std::vector<double> v_slice_l2_sq(const HeisenbergField& f, StftMode mode, double slice_rel_cut) {
  const VShearedStack V = v_transform_sheared(f, mode, slice_rel_cut);
  std::vector<double> out(V.slices.size(), 0.0);
  for (std::size_t k = 0; k < V.slices.size(); ++k) {
    if (V.slices[k].empty()) continue;
    out[k] = mesh_l2_sq(V.meshes[k], V.slices[k]);
  }
  return out;
}

double k_lambda_kernel(const TwistParameter& tw, const VecXd& xi, const VecXd& eta) {
  const double q = xi.squaredNorm() + eta.squaredNorm();
  const double sym = symplectic_form(xi, eta);
  return tw.c_lam * tw.c_lam * std::exp(-0.25 * tw.lam_coth_lam * q + 0.5 * tw.lam * sym);
}

namespace {

// One coordinate pair (x, v) of the K_lambda block factorization
//   exp(-(lam coth lam / 4)(x^2 + v^2) + sgn (lam/2) v x).
// 2-D quadrature on a box adapted to the slow (diagonal) direction.
double k_block_integral(const TwistParameter& tw, double sgn) {
  const double a = 0.25 * tw.lam_coth_lam;
  const double b = sgn * 0.5 * tw.lam;
  // Diagonal rates a -+ b/... : exponent = -(a - b/2)(x+v)^2/... decompose:
  // -(a)(x^2+v^2) + b v x = -((2a - b)/4)(x+v)^2 - ((2a + b)/4)(x-v)^2.
  const double slow = std::min(0.5 * (2.0 * a - b), 0.5 * (2.0 * a + b));
  const double fast = std::max(0.5 * (2.0 * a - b), 0.5 * (2.0 * a + b));
  const double sigma_slow = 1.0 / std::sqrt(std::max(slow, 1e-12));
  const double sigma_fast = 1.0 / std::sqrt(fast);
  const double halfw = 8.0 * sigma_slow;
  const int npts = std::max(64, static_cast<int>(std::ceil(2.0 * halfw / (0.7 * sigma_fast))));
  const BoxGrid g = BoxGrid::cube(2, npts, halfw);
  std::vector<double> terms(g.size());
  std::vector<double> p(2);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.point(i, p);
    terms[i] = std::exp(-a * (p[0] * p[0] + p[1] * p[1]) + b * p[0] * p[1]);
  }
  return pairwise_sum<double>(terms) * g.cell_volume();
}

}  // namespace

double k_lambda_mass_quadrature(const TwistParameter& tw) {
  // K factorizes over coordinate pairs (x_j, v_j) and (u_j, y_j):
  // [xi,eta] = sum_j u_j y_j - v_j x_j.
  const double block_minus = k_block_integral(tw, -1.0);
  const double block_plus = k_block_integral(tw, +1.0);
  return tw.c_lam * tw.c_lam * std::pow(block_minus * block_plus, tw.n);
}

double k_lambda_mixed_norm_quadrature(const TwistParameter& tw, double r, double s) {
  if (std::isinf(r) || std::isinf(s))
    throw ttfa_error("k_lambda_mixed_norm_quadrature: finite exponents only");
  // Inner L^r over xi = (x,u), then L^s over eta = (y,v); the block structure
  // K = prod_j K-(x_j, v_j) K+(u_j, y_j) makes both stages 1-D quadratures.
  const double a = 0.25 * tw.lam_coth_lam;
  const double b = 0.5 * tw.lam;

  // A(v) = (Int exp(r(-a x^2 - b v x - a v^2)) dx)^{1/r}, similarly B(y) with +b.
  auto outer_norm = [&](double sgn) {
    // Inner integral at fixed outer w, in log space (the completed square
    // exp(r b^2 w^2 / 4a) overflows on its own at large |lambda| w):
    //   log (Int e^{r(-a x^2 + sgn b w x)} dx)^{1/r} = b^2 w^2/(4a) + (1/r) log Q,
    // then the outer exponent s (log_inner - a w^2) stays bounded.
    const double sigma_in = 1.0 / std::sqrt(r * a);
    const double outer_rate = s * (a - b * b / (4.0 * a));
    const double sigma_out = 1.0 / std::sqrt(std::max(outer_rate, 1e-12));
    const double whalf = 8.0 * sigma_out;
    const int nw = std::max(96, static_cast<int>(std::ceil(2.0 * whalf / (0.5 * sigma_out))));
    const double dw = 2.0 * whalf / nw;
    std::vector<double> wterms(nw);
    for (int iw = 0; iw < nw; ++iw) {
      const double w = -whalf + iw * dw;
      const double center = sgn * b * w / (2.0 * a);
      const double xhalf = 8.0 * sigma_in;
      const int nx = 192;
      const double dx = 2.0 * xhalf / nx;
      double acc = 0.0;
      for (int ix = 0; ix < nx; ++ix) {
        const double x = center - xhalf + ix * dx;
        const double u = x - center;
        acc += std::exp(-r * a * u * u);
      }
      const double log_inner = b * b * w * w / (4.0 * a) + std::log(acc * dx) / r;
      wterms[iw] = std::exp(s * (log_inner - a * w * w));
    }
    return std::pow(pairwise_sum<double>(wterms) * dw, 1.0 / s);
  };

  const double block_v = outer_norm(-1.0);  // (x_j, v_j) pairs, phase -b v x
  const double block_y = outer_norm(+1.0);  // (u_j, y_j) pairs, phase +b u y
  return tw.c_lam * tw.c_lam * std::pow(block_v * block_y, tw.n);
}

double k_lambda_mixed_norm_shape(const TwistParameter& tw, double r, double s) {
  const int n = tw.n;
  return std::pow(tw.lam_over_sinh, 2.0 * n * (1.0 - 1.0 / s)) *
         std::pow(tw.lam_coth_lam, n * (1.0 / s - 1.0 / r));
}

double m_pq_heisenberg_norm(const HeisenbergField& f, const MixedNormSpec& spec,
                            const BoxGrid& xi_grid, const BoxGrid& eta_grid, StftMode mode) {
  const VStack V = v_transform(f, xi_grid, eta_grid, mode, 1e-8);
  double acc = 0.0;
  for (std::size_t k = 0; k < V.slices.size(); ++k) {
    if (V.slices[k].empty()) continue;
    PhaseField F(xi_grid, eta_grid);
    F.values = V.slices[k];
    const double nk = mixed_norm_lpq(F, spec);
    acc += nk * nk * V.dlam;
  }
  return std::sqrt(acc);
}

double m1_norm(const HeisenbergField& f, const MixedNormSpec& spec, const BoxGrid& xi_grid,
               const BoxGrid& eta_grid, StftMode mode) {
  const VStack V = v_transform(f, xi_grid, eta_grid, mode, 1e-8);
  PhaseField G(xi_grid, eta_grid);
  for (const auto& slice : V.slices) {
    if (slice.empty()) continue;
    for (std::size_t i = 0; i < G.values.size(); ++i)
      G.values[i] += std::norm(slice[i]) * V.dlam;
  }
  for (auto& v : G.values) v = std::sqrt(v.real());
  return mixed_norm_lpq(G, spec);
}

std::vector<cplx> bargmann_heisenberg(const HeisenbergField& f, const VecXc& zeta,
                                      const std::vector<cplx>& s_points, StftMode mode) {
  const int n = f.half_dim();
  const LambdaStack st = central_inverse_ft(f);

  // V_lambda f(zeta) for every slice at the single point zeta.
  std::vector<cplx> vlam(st.slices.size(), cplx{0.0, 0.0});
  const std::vector<std::pair<VecXd, VecXd>> node = {{zeta.real(), zeta.imag()}};
  for (std::size_t k = 0; k < st.slices.size(); ++k) {
    const TwistParameter tw(st.lam_grid[k], n);
    const Window w = slice_window(tw, f.base_grid);
    const cplx v = twisted_stft_at(tw, st.slices[k], w, node, mode)[0];
    const double dot = zeta.real().dot(zeta.imag());
    const double ph = -0.5 * tw.lam_coth_lam * dot;
    vlam[k] = std::sqrt(tw.c_lam) * v * cplx{std::cos(ph), std::sin(ph)};
  }

  std::vector<cplx> out(s_points.size());
  const double dlam = st.dlam();
  for (std::size_t m = 0; m < s_points.size(); ++m) {
    const cplx s = s_points[m];
    std::vector<cplx> terms(vlam.size());
    for (std::size_t k = 0; k < vlam.size(); ++k) {
      const double lam = st.lam_grid[k];
      terms[k] = cexp(cplx{0.0, -lam} * s - 0.5 * lam * lam) * vlam[k];
    }
    out[m] = cexp(0.25 * s * s) * pairwise_sum<cplx>(terms) * (dlam / (2.0 * kPi));
  }
  return out;
}

cplx dual_bracket(const HeisenbergField& f, const HeisenbergField& g, const BoxGrid& xi_grid,
                  const BoxGrid& eta_grid, StftMode mode) {
  const VStack Vf = v_transform(f, xi_grid, eta_grid, mode, 1e-8);
  const VStack Vg = v_transform(g, xi_grid, eta_grid, mode, 1e-8);
  const double vol = xi_grid.cell_volume() * eta_grid.cell_volume();
  cplx acc{0.0, 0.0};
  for (std::size_t k = 0; k < Vf.slices.size(); ++k) {
    if (Vf.slices[k].empty() || Vg.slices[k].empty()) continue;
    std::vector<cplx> terms(Vf.slices[k].size());
    for (std::size_t i = 0; i < terms.size(); ++i)
      terms[i] = Vf.slices[k][i] * std::conj(Vg.slices[k][i]);
    acc += pairwise_sum<cplx>(terms) * vol * Vf.dlam;
  }
  return acc;
}

void save_stack(const LambdaStack& s, const std::string& manifest_path) {
  std::string bin_path = manifest_path;
  const auto pos = bin_path.rfind(".json");
  if (pos != std::string::npos)
    bin_path.replace(pos, 5, ".bin");
  else
    bin_path += ".bin";

  nlohmann::json j;
  j["base_grid"] = {{"points_per_axis", s.base_grid.npts}, {"half_width", s.base_grid.halfw}};
  j["t_grid"] = {{"points_per_axis", s.t_grid.npts}, {"half_width", s.t_grid.halfw}};
  j["lam_grid"] = s.lam_grid;
  j["dtype"] = "c128";
  j["layout"] = "axis-major";
  j["data"] = bin_path.substr(bin_path.find_last_of('/') + 1);
  std::ofstream js(manifest_path);
  if (!js) throw ttfa_error("save_stack: cannot open " + manifest_path);
  js << j.dump(2) << "\n";

  std::ofstream bs(bin_path, std::ios::binary);
  if (!bs) throw ttfa_error("save_stack: cannot open " + bin_path);
  for (const auto& slice : s.slices)
    bs.write(reinterpret_cast<const char*>(slice.values.data()),
             static_cast<std::streamsize>(slice.values.size() * sizeof(cplx)));
  if (!bs) throw ttfa_error("save_stack: short write");
}

LambdaStack load_stack(const std::string& manifest_path) {
  std::ifstream js(manifest_path);
  if (!js) throw ttfa_error("load_stack: cannot open " + manifest_path);
  nlohmann::json j;
  js >> j;
  LambdaStack s;
  s.base_grid = BoxGrid(j.at("base_grid").at("points_per_axis").get<std::vector<int>>(),
                        j.at("base_grid").at("half_width").get<std::vector<double>>());
  s.t_grid = BoxGrid(j.at("t_grid").at("points_per_axis").get<std::vector<int>>(),
                     j.at("t_grid").at("half_width").get<std::vector<double>>());
  s.lam_grid = j.at("lam_grid").get<std::vector<double>>();

  const std::string dir = manifest_path.substr(0, manifest_path.find_last_of('/') + 1);
  std::ifstream bs(dir + j.at("data").get<std::string>(), std::ios::binary);
  if (!bs) throw ttfa_error("load_stack: cannot open payload");
  s.slices.assign(s.lam_grid.size(), SampledField(s.base_grid));
  for (auto& slice : s.slices) {
    bs.read(reinterpret_cast<char*>(slice.values.data()),
            static_cast<std::streamsize>(slice.values.size() * sizeof(cplx)));
    if (static_cast<std::size_t>(bs.gcount()) != slice.values.size() * sizeof(cplx))
      throw ttfa_error("load_stack: payload size mismatch");
  }
  return s;
}

}  // namespace ttfa
