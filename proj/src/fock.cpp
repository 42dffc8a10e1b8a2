#include "ttfa/fock.hpp"

#include <cmath>

namespace ttfa {

namespace {

// exp guard: beyond this the Gaussian factors of the Bargmann integrand can
// overflow/underflow; such lattice points are flagged.
constexpr double kExpGuard = 600.0;

cplx cexp(cplx z) { return std::exp(z); }

// Per-point evaluation tables: for point zeta, axis a of the base grid,
//   T_a[k] = exp(-h (zeta_a - x_k)^2 - i (lam/2) s_a zeta_{comp(a)} x_k)
// where comp pairs x_j with u_j and s = +1 on the first block, -1 on the second:
// [zeta, b] = (J zeta).b = sum_j zeta_{n+j} b_j - zeta_j b_{n+j}.
void build_axis_tables(const TwistParameter& tw, const BoxGrid& grid, const VecXc& zeta,
                       std::vector<std::vector<cplx>>& tabs) {
  const int n = tw.n;
  const int d = 2 * n;
  const cplx h{0.5 * tw.c_half, 0.0};
  tabs.assign(d, {});
  for (int a = 0; a < d; ++a) {
    const int comp = a < n ? a + n : a - n;
    const double sgn = a < n ? 1.0 : -1.0;
    const cplx chirp_coef = cplx{0.0, -0.5 * tw.lam * sgn} * zeta[comp];
    auto& t = tabs[a];
    t.resize(grid.npts[a]);
    for (int k = 0; k < grid.npts[a]; ++k) {
      const double x = grid.coord(a, k);
      const cplx dzeta = zeta[a] - x;
      t[k] = cexp(-h * dzeta * dzeta + chirp_coef * x);
    }
  }
}

// sum_b f(b) prod_a T_a[b_a], contracting the last axis innermost.
cplx contract_tables(const SampledField& f, const std::vector<std::vector<cplx>>& tabs) {
  const BoxGrid& g = f.grid;
  const int d = g.dim();
  std::vector<cplx> cur = f.values;
  std::size_t rows = cur.size();
  for (int a = d - 1; a >= 1; --a) {
    const std::size_t nlast = static_cast<std::size_t>(g.npts[a]);
    rows /= nlast;
    for (std::size_t r = 0; r < rows; ++r) {
      cplx acc{0.0, 0.0};
      const cplx* src = cur.data() + r * nlast;
      for (std::size_t k = 0; k < nlast; ++k) acc += src[k] * tabs[a][k];
      cur[r] = acc;
    }
  }
  cplx acc{0.0, 0.0};
  for (std::size_t k = 0; k < rows; ++k) acc += cur[k] * tabs[0][k];
  return acc;
}

bool exp_guarded(const TwistParameter& tw, const VecXc& zeta) {
  const double re2 = zeta.real().squaredNorm();
  const double im2 = zeta.imag().squaredNorm();
  return 0.25 * std::abs(tw.lam_coth_lam) * (re2 + 3.0 * im2) > kExpGuard;
}

}  // namespace

double weight_w_lambda(const TwistParameter& tw, const VecXc& zeta) {
  const double mod2 = zeta.squaredNorm();  // sum |zeta_j|^2
  const double sym = symplectic_form(zeta.real(), zeta.imag());
  return tw.c_lam * std::exp(-0.5 * tw.lam_coth_lam * mod2 + tw.lam * sym);
}

VecXc FockField::zeta_at(std::size_t xi_flat, std::size_t eta_flat) const {
  const int d = xi_grid.dim();
  std::vector<double> xi(d), eta(d);
  xi_grid.point(xi_flat, xi);
  eta_grid.point(eta_flat, eta);
  VecXc z(d);
  for (int a = 0; a < d; ++a) z[a] = cplx{xi[a], eta[a]};
  return z;
}

std::vector<cplx> bargmann_at(const TwistParameter& tw, const SampledField& f,
                              const std::vector<VecXc>& zeta_points) {
  if (f.grid.dim() != 2 * tw.n) throw ttfa_error("bargmann_at: field must be 2n-dimensional");
  const double vol = f.grid.cell_volume();
  const double pref_half = heat_kernel_prefactor(tw, 0.5);
  const double a1 = heat_kernel_rate(tw, 1.0);  // (1/4) lam coth lam

  std::vector<cplx> out(zeta_points.size());
  parallel_for(zeta_points.size(), [&](std::size_t lo, std::size_t hi) {
    std::vector<std::vector<cplx>> tabs;
    for (std::size_t i = lo; i < hi; ++i) {
      const VecXc& zeta = zeta_points[i];
      if (exp_guarded(tw, zeta)) { out[i] = cplx{0.0, 0.0}; continue; }
      build_axis_tables(tw, f.grid, zeta, tabs);
      const cplx conv = contract_tables(f, tabs) * (pref_half * vol);
      const cplx zz = (zeta.array() * zeta.array()).sum();
      out[i] = conv * cexp(a1 * zz);  // c_lam p_1(zeta)^{-1} = c_lam/c_lam e^{a1 zeta.zeta}
    }
  });
  return out;
}

std::vector<cplx> weighted_bargmann_at(const TwistParameter& tw, const SampledField& f,
                                       const std::vector<VecXc>& zeta_points) {
  if (f.grid.dim() != 2 * tw.n) throw ttfa_error("weighted_bargmann_at: field must be 2n-dim");
  const BoxGrid& grid = f.grid;
  const int n = tw.n;
  const int d = 2 * n;
  const double vol = grid.cell_volume();
  const double pref = heat_kernel_prefactor(tw, 0.5) * vol * std::sqrt(tw.c_lam);
  const double h = 0.5 * tw.c_half;
  const double a1 = heat_kernel_rate(tw, 1.0);

  std::vector<cplx> out(zeta_points.size());
  parallel_for(zeta_points.size(), [&](std::size_t lo, std::size_t hi) {
    std::vector<std::vector<cplx>> tabs(d);
    for (std::size_t i = lo; i < hi; ++i) {
      const VecXc& zeta = zeta_points[i];
      const VecXd xi = zeta.real();
      const VecXd eta = zeta.imag();
      // Per-axis exponent E_a(b) = -h(zeta_a - b)^2 - i(lam/2) s_a zeta_comp b,
      // shifted by its own max real part so every table entry is <= 1.
      double mshift = 0.0;
      for (int a = 0; a < d; ++a) {
        const int comp = a < n ? a + n : a - n;
        const double sgn = a < n ? 1.0 : -1.0;
        const cplx chirp_coef = cplx{0.0, -0.5 * tw.lam * sgn} * zeta[comp];
        auto& t = tabs[a];
        t.resize(grid.npts[a]);
        double ma = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < grid.npts[a]; ++k) {
          const double b = grid.coord(a, k);
          const cplx dz = zeta[a] - b;
          const cplx e = -h * dz * dz + chirp_coef * b;
          t[k] = e;
          ma = std::max(ma, e.real());
        }
        for (auto& v : t) v = cexp(v - ma);
        mshift += ma;
      }
      const cplx sum = contract_tables(f, tabs);
      // Combined scalar exponent: c_lam p_1^{-1} sqrt(w) = sqrt(c_lam)
      //   exp(a1 zeta.zeta - a1 |zeta|^2 + (lam/2)[xi,eta]); the |.|^2 and
      //   (zeta.zeta) real parts collapse to -(lam coth lam / 2)|eta|^2.
      const cplx zz = (zeta.array() * zeta.array()).sum();
      const cplx expo = a1 * zz +
                        cplx{-a1 * (xi.squaredNorm() + eta.squaredNorm()) +
                                 0.5 * tw.lam * symplectic_form(xi, eta) + mshift,
                             0.0};
      const double mag = std::abs(sum);
      if (mag == 0.0) { out[i] = cplx{0.0, 0.0}; continue; }
      const double total = expo.real() + std::log(mag) + std::log(pref);
      if (total < -700.0) { out[i] = cplx{0.0, 0.0}; continue; }
      if (total > 700.0) throw ttfa_error("weighted_bargmann_at: overflow at a node");
      out[i] = (sum / mag) * std::exp(cplx{total, expo.imag()});
    }
  });
  return out;
}

cplx reproducing_kernel_weighted(const TwistParameter& tw, const VecXc& zeta,
                                 const VecXc& zeta_prime, double d_n) {
  const VecXc zc = zeta.conjugate();
  const cplx dot = (zc.array() * zeta_prime.array()).sum();
  const cplx sym = symplectic_form_c(zc, zeta_prime);
  const VecXd xi = zeta_prime.real();
  const VecXd eta = zeta_prime.imag();
  const cplx expo = 0.5 * tw.lam_coth_lam * dot + cplx{0.0, 0.5 * tw.lam} * sym +
                    cplx{-0.25 * tw.lam_coth_lam * (xi.squaredNorm() + eta.squaredNorm()) +
                             0.5 * tw.lam * symplectic_form(xi, eta),
                         0.0};
  if (expo.real() < -700.0) return cplx{0.0, 0.0};
  return d_n * tw.c_lam * std::sqrt(tw.c_lam) * cexp(expo);
}

FockField bargmann_transform(const TwistParameter& tw, const SampledField& f,
                             const BoxGrid& xi_grid, const BoxGrid& eta_grid) {
  if (xi_grid.dim() != 2 * tw.n || eta_grid.dim() != 2 * tw.n)
    throw ttfa_error("bargmann_transform: phase grids must be 2n-dimensional");
  FockField F;
  F.tw = tw;
  F.xi_grid = xi_grid;
  F.eta_grid = eta_grid;
  F.source = f;
  F.values.resize(xi_grid.size() * eta_grid.size());
  F.flags.assign(F.values.size(), 0);

  const std::size_t neta = eta_grid.size();
  std::vector<VecXc> pts(F.values.size());
  for (std::size_t i = 0; i < xi_grid.size(); ++i)
    for (std::size_t j = 0; j < neta; ++j) pts[i * neta + j] = F.zeta_at(i, j);
  F.values = bargmann_at(tw, f, pts);
  for (std::size_t k = 0; k < pts.size(); ++k)
    if (exp_guarded(tw, pts[k])) F.flags[k] = 1;
  return F;
}

cplx fock_inner(const FockField& F, const FockField& G) {
  if (F.xi_grid != G.xi_grid || F.eta_grid != G.eta_grid)
    throw ttfa_error("fock_inner: lattice mismatch");
  const double vol = F.xi_grid.cell_volume() * F.eta_grid.cell_volume();
  const double measure = std::pow(4.0, F.tw.n) * vol;
  const std::size_t neta = F.n_eta();
  std::vector<cplx> terms(F.values.size());
  for (std::size_t i = 0; i < F.n_xi(); ++i)
    for (std::size_t j = 0; j < neta; ++j) {
      const std::size_t k = i * neta + j;
      terms[k] = F.values[k] * std::conj(G.values[k]) * weight_w_lambda(F.tw, F.zeta_at(i, j));
    }
  return pairwise_sum<cplx>(terms) * measure;
}

double fock_norm(const FockField& F) {
  return std::sqrt(std::max(0.0, fock_inner(F, F).real()));
}

cplx reproducing_kernel(const TwistParameter& tw, const VecXc& zeta, const VecXc& zeta_prime,
                        double d_n) {
  const VecXc zc = zeta.conjugate();
  const cplx dot = (zc.array() * zeta_prime.array()).sum();
  const cplx sym = symplectic_form_c(zc, zeta_prime);
  return d_n * tw.c_lam * cexp(0.5 * tw.lam_coth_lam * dot + cplx{0.0, 0.5 * tw.lam} * sym);
}

cplx fock_pair_with_kernel(const FockField& F, const VecXc& zeta, double d_n) {
  const double vol = F.xi_grid.cell_volume() * F.eta_grid.cell_volume();
  const double measure = std::pow(4.0, F.tw.n) * vol;
  const std::size_t neta = F.n_eta();
  std::vector<cplx> terms(F.values.size());
  for (std::size_t i = 0; i < F.n_xi(); ++i)
    for (std::size_t j = 0; j < neta; ++j) {
      const std::size_t k = i * neta + j;
      const VecXc zp = F.zeta_at(i, j);
      terms[k] = F.values[k] * std::conj(reproducing_kernel(F.tw, zeta, zp, d_n)) *
                 weight_w_lambda(F.tw, zp);
    }
  return pairwise_sum<cplx>(terms) * measure;
}

SampledField u_lambda_apply(const TwistParameter& tw, const SampledField& f, bool adjoint,
                            double coverage_tol) {
  if (f.grid.dim() != 2 * tw.n) throw ttfa_error("u_lambda_apply: field must be 2n-dimensional");
  const double c = tw.c_half;
  const BoxGrid& g = f.grid;
  const int d = g.dim();
  const int sign = adjoint ? +1 : -1;

  // Coverage: spectral mass at the usable band edge must be negligible,
  // otherwise the band-limited evaluation below would discard real signal.
  const SampledField spec = fourier_transform(f, sign);
  double total = 0.0, edge = 0.0;
  std::vector<int> idx(d);
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    const double m = std::norm(spec.values[i]);
    total += m;
    spec.grid.unflat(i, idx);
    for (int a = 0; a < d; ++a) {
      if (std::abs(spec.grid.coord(a, idx[a])) > 0.9 * spec.grid.halfw[a]) {
        edge += m;
        break;
      }
    }
  }
  if (total > 0.0 && edge / total > coverage_tol)
    throw ttfa_error("u_lambda_apply: dual-grid coverage violation (spectral mass at band edge)");

  // Evaluate fhat(c x) on the dilated copy of the grid; points past the
  // Nyquist band carry no admissible signal and are set to zero.
  std::vector<double> scaled_half(d);
  for (int a = 0; a < d; ++a) scaled_half[a] = c * g.halfw[a];
  const BoxGrid scaled(g.npts, scaled_half);
  SampledField vals = ft_on_grid(f, scaled, sign);

  SampledField out(g);
  const double pref = std::pow(c, tw.n);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    scaled.unflat(i, idx);
    bool in_band = true;
    for (int a = 0; a < d; ++a)
      if (std::abs(scaled.coord(a, idx[a])) > spec.grid.halfw[a]) { in_band = false; break; }
    out.values[i] = in_band ? pref * vals.values[i] : cplx{0.0, 0.0};
  }
  return out;
}

FockField fock_rotate(const FockField& F) {
  if (F.xi_grid != F.eta_grid)
    throw ttfa_error("fock_rotate: lattice must be symmetric (xi grid == eta grid)");
  const BoxGrid& g = F.xi_grid;
  const int d = g.dim();
  FockField out = F;
  // UF at (xi, eta) = F(-i zeta) = F at (xi' = eta, eta' = -xi); negation is
  // the periodic index map k -> (N - k) mod N on the centered lattice.
  auto negate_flat = [&](std::size_t flat) {
    std::vector<int> idx(d);
    g.unflat(flat, idx);
    for (int a = 0; a < d; ++a) idx[a] = (g.npts[a] - idx[a]) % g.npts[a];
    return g.flat(idx);
  };
  const std::size_t neta = F.n_eta();
  for (std::size_t i = 0; i < F.n_xi(); ++i) {
    const std::size_t ni = negate_flat(i);
    for (std::size_t j = 0; j < neta; ++j) {
      out.values[i * neta + j] = F.values[j * neta + ni];
      out.flags[i * neta + j] = F.flags[j * neta + ni];
    }
  }
  if (F.source_valid) {
    out.source = u_lambda_apply(F.tw, F.source);
    out.source_valid = true;
  }
  return out;
}

FockField rho_apply(const TwistParameter& tw, const VecXc& zeta0, const FockField& F) {
  if (!F.source_valid) throw ttfa_error("rho_apply: need analytic re-evaluation (no source field)");
  const std::size_t neta = F.n_eta();
  FockField out = F;

  std::vector<VecXc> pts(F.values.size());
  for (std::size_t i = 0; i < F.n_xi(); ++i)
    for (std::size_t j = 0; j < neta; ++j) pts[i * neta + j] = F.zeta_at(i, j) - zeta0;
  const std::vector<cplx> shifted = bargmann_at(tw, F.source, pts);

  const VecXc z0c = zeta0.conjugate();
  const double mod0 = zeta0.squaredNorm();
  const double sym0 = symplectic_form(zeta0.real(), zeta0.imag());
  const cplx const_factor =
      cexp(cplx{-0.25 * tw.lam_coth_lam * mod0 + 0.5 * tw.lam * sym0, 0.0});
  for (std::size_t i = 0; i < F.n_xi(); ++i)
    for (std::size_t j = 0; j < neta; ++j) {
      const std::size_t k = i * neta + j;
      const VecXc zeta = F.zeta_at(i, j);
      const cplx dot = (zeta.array() * z0c.array()).sum();
      const cplx sym = symplectic_form_c(zeta, z0c);
      out.values[k] = shifted[k] * const_factor *
                      cexp(0.5 * tw.lam_coth_lam * dot - cplx{0.0, 0.5 * tw.lam} * sym);
    }
  // rho_lam(zeta0) B f = B (Pi_lam(zeta0) f): keep the generator in sync.
  out.source = rep_pi_lambda(tw, zeta0.real(), zeta0.imag(), F.source);
  out.source_valid = true;
  return out;
}

SampledField ladder_apply(const TwistParameter& tw, int j, LadderOp which, const SampledField& f) {
  const int n = tw.n;
  if (j < 0 || j >= n) throw ttfa_error("ladder_apply: axis index out of range");
  const BoxGrid& g = f.grid;
  const int d = g.dim();
  if (d != 2 * n) throw ttfa_error("ladder_apply: field must be 2n-dimensional");

  // Spectral derivative (i w multiplier, Nyquist bin dropped): grid-spacing
  // finite differences cannot reach the 1e-5 tolerance the ladder identities
  // are tested at, the FFT derivative is exact to the periodization floor.
  auto derivative = [&](int axis) {
    SampledField out = f;
    dft_inplace(out.values, g.npts, -1);
    const int nk = g.npts[axis];
    const double base = 2.0 * kPi / (nk * g.spacing(axis));
    std::vector<cplx> mult(nk);
    for (int k = 0; k < nk; ++k) {
      const int ks = (k <= nk / 2) ? k : k - nk;
      mult[k] = (nk % 2 == 0 && k == nk / 2) ? cplx{0.0, 0.0} : cplx{0.0, base * ks};
    }
    std::vector<int> idx(d);
    const double inv_n = 1.0 / static_cast<double>(g.size());
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      g.unflat(i, idx);
      out.values[i] *= mult[idx[axis]] * inv_n;
    }
    dft_inplace(out.values, g.npts, +1);
    return out;
  };

  auto coordinate_multiply = [&](int axis, const SampledField& in) {
    SampledField out = in;
    std::vector<int> idx(d);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      g.unflat(i, idx);
      out.values[i] *= g.coord(axis, idx[axis]);
    }
    return out;
  };

  const double a = tw.c_half;
  const cplx b{0.0, 0.5 * tw.lam};

  auto ladder_a = [&]() {
    SampledField out = derivative(j);
    const SampledField xf = coordinate_multiply(j, f);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= a * xf.values[i];
    return out;
  };
  auto ladder_b = [&]() {
    SampledField out = derivative(n + j);
    const SampledField uf = coordinate_multiply(n + j, f);
    for (std::size_t i = 0; i < out.values.size(); ++i)
      out.values[i] = -out.values[i] + a * uf.values[i];
    return out;
  };

  switch (which) {
    case LadderOp::A: return ladder_a();
    case LadderOp::B: return ladder_b();
    case LadderOp::P: {
      const cplx denom = cplx{a * a, 0.0} + b * b;
      SampledField va = ladder_a(), vb = ladder_b();
      SampledField out(g);
      for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = -(a * va.values[i] - b * vb.values[i]) / denom;
      return out;
    }
    case LadderOp::Q: {
      const cplx denom = cplx{a * a, 0.0} + b * b;
      SampledField va = ladder_a(), vb = ladder_b();
      SampledField out(g);
      for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = (b * va.values[i] + a * vb.values[i]) / denom;
      return out;
    }
  }
  throw ttfa_error("ladder_apply: unknown operator");
}

}  // namespace ttfa
