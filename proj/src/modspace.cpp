#include "ttfa/modspace.hpp"

#include <cmath>

namespace ttfa {

namespace {

cplx cexp(cplx z) { return std::exp(z); }

// (xi', eta') = Lambda(xi,eta) plus the scalar phase of the closed-form kernel
//   e_lam(eta) tau_lam(xi) g (b) = g(b - xi') e^{i b.eta'} e^{-i theta},
//   theta = (lam/2) tanh(lam/2) (xi.eta).
struct KernelFrame {
  VecXd xi_p, eta_p;
  double theta;
};

KernelFrame kernel_frame(const TwistParameter& tw, const VecXd& xi, const VecXd& eta) {
  KernelFrame fr;
  lambda_matrix_apply(tw, xi, eta, fr.xi_p, fr.eta_p);
  fr.theta = 0.5 * tw.lam * tw.tanh_half * xi.dot(eta);
  return fr;
}

double window_axis_alpha(const Window& g, int a) { return g.alpha[a]; }

// conj(g)(b - xi') e^{-i b eta'} along one axis (amp folded into axis 0).
void window_axis_vector(const Window& g, const BoxGrid& grid, int axis, double shift,
                        double freq, std::vector<cplx>& out) {
  out.resize(grid.npts[axis]);
  const double alpha = window_axis_alpha(g, axis);
  const double mu = g.mu[axis] + shift;
  const double amp = axis == 0 ? g.amp : 1.0;
  for (int k = 0; k < grid.npts[axis]; ++k) {
    const double b = grid.coord(axis, k);
    const double d = b - mu;
    const double mag = amp * std::exp(-alpha * d * d);
    out[k] = mag * cplx{std::cos(freq * b), std::sin(freq * b)};
  }
}

// sum_b f(b) prod_a T_a[b_a]
cplx contract_axes(const SampledField& f, const std::vector<std::vector<cplx>>& tabs) {
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

void require_gaussian(const Window& g, const char* where) {
  if (!g.has_gaussian)
    throw ttfa_error(std::string(where) +
                     ": this mode needs an analytic (Gaussian) window; use StftMode::direct");
}

}  // namespace

Window Window::gaussian(const BoxGrid& grid, double amp, std::vector<double> alpha,
                        std::vector<double> mu) {
  Window w;
  w.has_gaussian = true;
  w.amp = amp;
  w.alpha = std::move(alpha);
  w.mu = std::move(mu);
  if (static_cast<int>(w.alpha.size()) != grid.dim() || w.mu.size() != w.alpha.size())
    throw ttfa_error("Window::gaussian: bad parameter dimensions");
  w.samples = SampledField(grid);
  w.samples.fill([&](std::span<const double> x) {
    double e = 0.0;
    for (std::size_t a = 0; a < w.alpha.size(); ++a) {
      const double d = x[a] - w.mu[a];
      e += w.alpha[a] * d * d;
    }
    return cplx{w.amp * std::exp(-e), 0.0};
  });
  return w;
}

Window Window::heat_half(const TwistParameter& tw, const BoxGrid& grid) {
  return gaussian(grid, heat_kernel_prefactor(tw, 0.5),
                  std::vector<double>(grid.dim(), heat_kernel_rate(tw, 0.5)),
                  std::vector<double>(grid.dim(), 0.0));
}

Window Window::sampled(SampledField f) {
  Window w;
  w.samples = std::move(f);
  return w;
}

cplx Window::eval(std::span<const double> x) const {
  if (!has_gaussian) throw ttfa_error("Window::eval: sampled-only window");
  double e = 0.0;
  for (std::size_t a = 0; a < alpha.size(); ++a) {
    const double d = x[a] - mu[a];
    e += alpha[a] * d * d;
  }
  return cplx{amp * std::exp(-e), 0.0};
}

std::pair<BoxGrid, BoxGrid> adapted_phase_lattice(const TwistParameter& tw, int base_npts,
                                                  double base_halfw, double cap_halfw) {
  const double smin = lambda_matrix_sigma_min(tw);
  double halfw = std::min(cap_halfw, std::max(base_halfw, base_halfw / smin));
  int npts = base_npts;
  if (halfw > 2.0 * base_halfw) npts = base_npts + base_npts / 3;  // keep dx in check
  const int d = 2 * tw.n;
  return {BoxGrid::cube(d, npts, halfw), BoxGrid::cube(d, npts, halfw)};
}

std::vector<cplx> twisted_stft_at(const TwistParameter& tw, const SampledField& f, const Window& g,
                                  const std::vector<std::pair<VecXd, VecXd>>& nodes,
                                  StftMode mode) {
  const BoxGrid& grid = f.grid;
  const int d = grid.dim();
  const double vol = grid.cell_volume();
  std::vector<cplx> out(nodes.size());

  if (mode == StftMode::direct) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const SampledField kernel =
          twisted_modulate(tw, nodes[i].second, twisted_translate(tw, nodes[i].first, g.samples));
      out[i] = inner_product(f, kernel);
    }
    return out;
  }

  require_gaussian(g, "twisted_stft_at");
  if (mode == StftMode::quadrature) {
    // V = e^{i theta} sum_b f(b) conj(g)(b - xi') e^{-i b.eta'} vol,
    // every term evaluated with its own exponential (the slow oracle).
    parallel_for(nodes.size(), [&](std::size_t lo, std::size_t hi) {
      std::vector<double> b(d);
      for (std::size_t i = lo; i < hi; ++i) {
        const KernelFrame fr = kernel_frame(tw, nodes[i].first, nodes[i].second);
        cplx acc{0.0, 0.0};
        for (std::size_t k = 0; k < f.values.size(); ++k) {
          grid.point(k, b);
          double e = 0.0, ph = 0.0;
          for (int a = 0; a < d; ++a) {
            const double dd = b[a] - g.mu[a] - fr.xi_p[a];
            e += g.alpha[a] * dd * dd;
            ph += b[a] * fr.eta_p[a];
          }
          acc += f.values[k] * g.amp * std::exp(-e) * cplx{std::cos(ph), -std::sin(ph)};
        }
        out[i] = acc * vol * cexp(cplx{0.0, fr.theta});
      }
    });
    return out;
  }

  // fast: per-node separable axis tables, then one contraction.
  parallel_for(nodes.size(), [&](std::size_t lo, std::size_t hi) {
    std::vector<std::vector<cplx>> tabs(d);
    for (std::size_t i = lo; i < hi; ++i) {
      const KernelFrame fr = kernel_frame(tw, nodes[i].first, nodes[i].second);
      for (int a = 0; a < d; ++a) window_axis_vector(g, grid, a, fr.xi_p[a], -fr.eta_p[a], tabs[a]);
      out[i] = contract_axes(f, tabs) * vol * cexp(cplx{0.0, fr.theta});
    }
  });
  return out;
}

PhaseField twisted_stft(const TwistParameter& tw, const SampledField& f, const Window& g,
                        const BoxGrid& xi_grid, const BoxGrid& eta_grid, StftMode mode) {
  if (f.grid != g.samples.grid) throw ttfa_error("twisted_stft: grid mismatch");
  const int d = f.grid.dim();
  if (xi_grid.dim() != d || eta_grid.dim() != d)
    throw ttfa_error("twisted_stft: phase grids must match the base dimension");
  PhaseField V(xi_grid, eta_grid);

  if (tw.n == 1 && mode == StftMode::fast) {
    require_gaussian(g, "twisted_stft");
    // Pair-indexed chirp tables: xi'_1 = xi_1 + t eta_2 pairs (i_x1, i_e2) =: rA,
    // xi'_2 = xi_2 - t eta_1 pairs (i_x2, i_e1) =: rB; likewise
    // eta'_1 = (lam/2) xi_2 - c eta_1 -> rB, eta'_2 = -(lam/2) xi_1 - c eta_2 -> rA.
    const BoxGrid& bg = f.grid;
    const int nb1 = bg.npts[0], nb2 = bg.npts[1];
    const int nx1 = xi_grid.npts[0], nx2 = xi_grid.npts[1];
    const int ne1 = eta_grid.npts[0], ne2 = eta_grid.npts[1];
    const double t = tw.tanh_half, c = tw.c_half, halflam = 0.5 * tw.lam;
    const double vol = bg.cell_volume();

    const std::size_t nA = static_cast<std::size_t>(nx1) * ne2;
    const std::size_t nB = static_cast<std::size_t>(nx2) * ne1;
    std::vector<cplx> tabA1(nA * nb1), tabA2(nA * nb2), tabB1(nB * nb1), tabB2(nB * nb2);
    std::vector<cplx> work(nA * nB);

    std::vector<cplx> axis(std::max(nb1, nb2));
    for (int i1 = 0; i1 < nx1; ++i1)
      for (int j2 = 0; j2 < ne2; ++j2) {
        const double xi1 = xi_grid.coord(0, i1), eta2 = eta_grid.coord(1, j2);
        const std::size_t rA = static_cast<std::size_t>(i1) * ne2 + j2;
        // window factor on axis 1 shifted by xi'_1 = xi1 + t eta2 (chirp on
        // this axis carries the rB index, see tabB1)
        window_axis_vector(g, bg, 0, xi1 + t * eta2, 0.0, axis);
        std::copy(axis.begin(), axis.begin() + nb1, tabA1.begin() + rA * nb1);
        // eta'_2 chirp on axis 2: e^{-i b2 eta'_2} with eta'_2 = -(lam/2) xi1 - c eta2
        for (int k = 0; k < nb2; ++k) {
          const double ph = bg.coord(1, k) * (halflam * xi1 + c * eta2);
          tabA2[rA * nb2 + k] = cplx{std::cos(ph), std::sin(ph)};
        }
      }
    for (int i2 = 0; i2 < nx2; ++i2)
      for (int j1 = 0; j1 < ne1; ++j1) {
        const double xi2 = xi_grid.coord(1, i2), eta1 = eta_grid.coord(0, j1);
        const std::size_t rB = static_cast<std::size_t>(i2) * ne1 + j1;
        // window factor on axis 2 shifted by xi'_2 = xi2 - t eta1 (no chirp here)
        window_axis_vector(g, bg, 1, xi2 - t * eta1, 0.0, axis);
        std::copy(axis.begin(), axis.begin() + nb2, tabB2.begin() + rB * nb2);
        // eta'_1 chirp on axis 1: e^{-i b1 eta'_1}, eta'_1 = (lam/2) xi2 - c eta1
        const double freq = -(halflam * xi2 - c * eta1);
        for (int k = 0; k < nb1; ++k) {
          const double ph = bg.coord(0, k) * freq;
          tabB1[rB * nb1 + k] = cplx{std::cos(ph), std::sin(ph)};
        }
      }

    parallel_for(nA, [&](std::size_t lo, std::size_t hi) {
      std::vector<cplx> inner(static_cast<std::size_t>(nb1) * nB);
      std::vector<cplx> kernel(nb2);
      for (std::size_t rA = lo; rA < hi; ++rA) {
        const cplx* a2 = &tabA2[rA * nb2];
        for (std::size_t rB = 0; rB < nB; ++rB) {
          const cplx* b2 = &tabB2[rB * nb2];
          for (int k = 0; k < nb2; ++k) kernel[k] = a2[k] * b2[k];
          for (int b1 = 0; b1 < nb1; ++b1) {
            const cplx* frow = &f.values[static_cast<std::size_t>(b1) * nb2];
            cplx acc{0.0, 0.0};
            for (int k = 0; k < nb2; ++k) acc += frow[k] * kernel[k];
            inner[static_cast<std::size_t>(b1) * nB + rB] = acc;
          }
        }
        const cplx* a1 = &tabA1[rA * nb1];
        for (std::size_t rB = 0; rB < nB; ++rB) {
          const cplx* b1row = &tabB1[rB * nb1];
          cplx acc{0.0, 0.0};
          for (int b1 = 0; b1 < nb1; ++b1)
            acc += a1[b1] * b1row[b1] * inner[static_cast<std::size_t>(b1) * nB + rB];
          work[rA * nB + rB] = acc * vol;
        }
      }
    });

    // Scatter into the PhaseField layout with the scalar phase.
    for (int i1 = 0; i1 < nx1; ++i1)
      for (int i2 = 0; i2 < nx2; ++i2)
        for (int j1 = 0; j1 < ne1; ++j1)
          for (int j2 = 0; j2 < ne2; ++j2) {
            const std::size_t rA = static_cast<std::size_t>(i1) * ne2 + j2;
            const std::size_t rB = static_cast<std::size_t>(i2) * ne1 + j1;
            const double theta = 0.5 * tw.lam * tw.tanh_half *
                                 (xi_grid.coord(0, i1) * eta_grid.coord(0, j1) +
                                  xi_grid.coord(1, i2) * eta_grid.coord(1, j2));
            V.at(static_cast<std::size_t>(i1) * nx2 + i2,
                 static_cast<std::size_t>(j1) * ne2 + j2) =
                work[rA * nB + rB] * cplx{std::cos(theta), std::sin(theta)};
          }
    return V;
  }

  // Generic: evaluate node by node.
  std::vector<std::pair<VecXd, VecXd>> nodes;
  nodes.reserve(V.values.size());
  const int dd = f.grid.dim();
  std::vector<double> x(dd), e(dd);
  for (std::size_t i = 0; i < xi_grid.size(); ++i) {
    xi_grid.point(i, x);
    for (std::size_t j = 0; j < eta_grid.size(); ++j) {
      eta_grid.point(j, e);
      VecXd xv = Eigen::Map<const VecXd>(x.data(), dd);
      VecXd ev = Eigen::Map<const VecXd>(e.data(), dd);
      nodes.emplace_back(std::move(xv), std::move(ev));
    }
  }
  V.values = twisted_stft_at(tw, f, g, nodes, mode);
  return V;
}

SampledField twisted_stft_adjoint(const TwistParameter& tw, const PhaseField& F, const Window& g) {
  const BoxGrid& grid = g.samples.grid;
  const int d = grid.dim();
  SampledField out(grid);
  const double vol = F.xi_grid.cell_volume() * F.eta_grid.cell_volume();

  if (!g.has_gaussian) {
    // Operator route: out += F(node) vol * e_lam(eta) tau_lam(xi) g.
    std::vector<double> x(d), e(d);
    for (std::size_t i = 0; i < F.n_xi(); ++i) {
      F.xi_grid.point(i, x);
      for (std::size_t j = 0; j < F.n_eta(); ++j) {
        const cplx coef = F.at(i, j) * vol;
        if (std::abs(coef) == 0.0) continue;
        F.eta_grid.point(j, e);
        const VecXd xv = Eigen::Map<const VecXd>(x.data(), d);
        const VecXd ev = Eigen::Map<const VecXd>(e.data(), d);
        const SampledField k = twisted_modulate(tw, ev, twisted_translate(tw, xv, g.samples));
        for (std::size_t m = 0; m < out.values.size(); ++m) out.values[m] += coef * k.values[m];
      }
    }
    return out;
  }

  if (tw.n == 1) {
    const int nb2 = grid.npts[1];
    const std::size_t nxi = F.n_xi();
    std::vector<std::vector<cplx>> partial(reduction_chunk_count(nxi));
    parallel_for_chunks(nxi, [&](std::size_t chunk, std::size_t lo, std::size_t hi) {
      std::vector<cplx> k1, k2;
      std::vector<double> x(d), e(d);
      std::vector<cplx> local(out.values.size(), cplx{0, 0});
      for (std::size_t i = lo; i < hi; ++i) {
        F.xi_grid.point(i, x);
        for (std::size_t j = 0; j < F.n_eta(); ++j) {
          const cplx cf = F.at(i, j);
          if (std::abs(cf) == 0.0) continue;
          F.eta_grid.point(j, e);
          const VecXd xv = Eigen::Map<const VecXd>(x.data(), d);
          const VecXd ev = Eigen::Map<const VecXd>(e.data(), d);
          const KernelFrame fr = kernel_frame(tw, xv, ev);
          // kernel(b) = g(b - xi') e^{+i b.eta'} e^{-i theta}
          window_axis_vector(g, grid, 0, fr.xi_p[0], -fr.eta_p[0], k1);
          window_axis_vector(g, grid, 1, fr.xi_p[1], -fr.eta_p[1], k2);
          for (auto& v : k1) v = std::conj(v);  // window is real; conj flips the chirp only
          for (auto& v : k2) v = std::conj(v);
          const cplx coef = cf * vol * cexp(cplx{0.0, -fr.theta});
          for (int b1 = 0; b1 < grid.npts[0]; ++b1) {
            const cplx c1 = coef * k1[b1];
            cplx* row = &local[static_cast<std::size_t>(b1) * nb2];
            for (int b2 = 0; b2 < nb2; ++b2) row[b2] += c1 * k2[b2];
          }
        }
      }
      partial[chunk] = std::move(local);
    });
    for (const auto& local : partial) {
      if (local.empty()) continue;
      for (std::size_t m = 0; m < out.values.size(); ++m) out.values[m] += local[m];
    }
    return out;
  }

  // Generic analytic window: accumulate point by point.
  std::vector<double> x(d), e(d), b(d);
  for (std::size_t i = 0; i < F.n_xi(); ++i) {
    F.xi_grid.point(i, x);
    for (std::size_t j = 0; j < F.n_eta(); ++j) {
      const cplx cf = F.at(i, j);
      if (std::abs(cf) == 0.0) continue;
      F.eta_grid.point(j, e);
      const VecXd xv = Eigen::Map<const VecXd>(x.data(), d);
      const VecXd ev = Eigen::Map<const VecXd>(e.data(), d);
      const KernelFrame fr = kernel_frame(tw, xv, ev);
      const cplx coef = cf * vol * cexp(cplx{0.0, -fr.theta});
      for (std::size_t m = 0; m < out.values.size(); ++m) {
        grid.point(m, b);
        double ee = 0.0, ph = 0.0;
        for (int a = 0; a < d; ++a) {
          const double dd2 = b[a] - g.mu[a] - fr.xi_p[a];
          ee += g.alpha[a] * dd2 * dd2;
          ph += b[a] * fr.eta_p[a];
        }
        out.values[m] += coef * g.amp * std::exp(-ee) * cplx{std::cos(ph), std::sin(ph)};
      }
    }
  }
  return out;
}

std::pair<VecXd, VecXd> ShearedMesh::node(std::size_t x_flat, std::size_t y_flat) const {
  const int d = x_grid.dim();
  std::vector<double> x(d), y(d);
  x_grid.point(x_flat, x);
  y_grid.point(y_flat, y);
  VecXd rhs(2 * d);
  for (int a = 0; a < d; ++a) rhs[a] = x[a];
  for (int a = 0; a < d; ++a) rhs[d + a] = y[a];
  const VecXd v = lambda_inv * rhs;
  return {v.head(d), v.tail(d)};
}

ShearedMesh make_sheared_mesh(const TwistParameter& tw, const BoxGrid& x_grid,
                              const BoxGrid& y_grid) {
  ShearedMesh m;
  m.tw = tw;
  m.x_grid = x_grid;
  m.y_grid = y_grid;
  m.lambda_inv = build_lambda_matrix(tw).inverse();
  m.node_weight = x_grid.cell_volume() * y_grid.cell_volume() / lambda_matrix_det_closed_form(tw);
  return m;
}

ShearedMesh default_sheared_mesh(const TwistParameter& tw, const SampledField& f, const Window& g,
                                 int npts, double radius_sigmas) {
  require_gaussian(g, "default_sheared_mesh");
  const BoxGrid& bg = f.grid;
  const int d = bg.dim();

  auto moments = [&](const SampledField& h, std::vector<double>& center,
                     std::vector<double>& var) {
    center.assign(d, 0.0);
    var.assign(d, 0.0);
    double mass = 0.0;
    std::vector<double> x(d);
    for (std::size_t i = 0; i < h.values.size(); ++i) {
      const double m2 = std::norm(h.values[i]);
      if (m2 == 0.0) continue;
      h.grid.point(i, x);
      mass += m2;
      for (int a = 0; a < d; ++a) center[a] += m2 * x[a];
    }
    if (mass <= 0.0) throw ttfa_error("default_sheared_mesh: zero field");
    for (int a = 0; a < d; ++a) center[a] /= mass;
    for (std::size_t i = 0; i < h.values.size(); ++i) {
      const double m2 = std::norm(h.values[i]);
      if (m2 == 0.0) continue;
      h.grid.point(i, x);
      for (int a = 0; a < d; ++a) var[a] += m2 * (x[a] - center[a]) * (x[a] - center[a]);
    }
    for (int a = 0; a < d; ++a) var[a] /= mass;
  };

  std::vector<double> cx, vx, cw, vw;
  moments(f, cx, vx);
  const SampledField fhat = fourier_transform(f, -1);
  moments(fhat, cw, vw);

  std::vector<double> xhalf(d), yhalf(d);
  for (int a = 0; a < d; ++a) {
    const double var_g = 0.25 / g.alpha[a];        // position variance of |g|^2
    const double varw_g = g.alpha[a];              // frequency variance of |ghat|^2
    xhalf[a] = radius_sigmas * std::sqrt(vx[a] + var_g) + std::abs(cx[a]) + std::abs(g.mu[a]);
    yhalf[a] = radius_sigmas * std::sqrt(vw[a] + varw_g) + std::abs(cw[a]);
  }
  return make_sheared_mesh(tw, BoxGrid(std::vector<int>(d, npts), xhalf),
                           BoxGrid(std::vector<int>(d, npts), yhalf));
}

std::vector<cplx> twisted_stft_on_mesh(const TwistParameter& tw, const SampledField& f,
                                       const Window& g, const ShearedMesh& mesh, StftMode mode) {
  const std::size_t nx = mesh.x_grid.size();
  const std::size_t ny = mesh.y_grid.size();

  if (mode != StftMode::fast || tw.n != 1 || !g.has_gaussian) {
    std::vector<std::pair<VecXd, VecXd>> nodes;
    nodes.reserve(nx * ny);
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t j = 0; j < ny; ++j) nodes.push_back(mesh.node(i, j));
    return twisted_stft_at(tw, f, g, nodes, mode);
  }

  // Fast path in the classical frame: V^lam(node) = e^{i theta} V^cl(x_i, y_j)
  // with single-axis tables; Lambda(node) = (x_i, y_j) by construction.
  const BoxGrid& bg = f.grid;
  const int nb1 = bg.npts[0], nb2 = bg.npts[1];
  const int mx1 = mesh.x_grid.npts[0], mx2 = mesh.x_grid.npts[1];
  const int my1 = mesh.y_grid.npts[0], my2 = mesh.y_grid.npts[1];
  const double vol = bg.cell_volume();

  std::vector<std::vector<cplx>> W1(mx1), W2(mx2), E1(my1), E2(my2);
  for (int i = 0; i < mx1; ++i) window_axis_vector(g, bg, 0, mesh.x_grid.coord(0, i), 0.0, W1[i]);
  for (int i = 0; i < mx2; ++i) window_axis_vector(g, bg, 1, mesh.x_grid.coord(1, i), 0.0, W2[i]);
  auto chirp = [&](int axis, double y, std::vector<cplx>& t) {
    t.resize(bg.npts[axis]);
    for (int k = 0; k < bg.npts[axis]; ++k) {
      const double ph = -y * bg.coord(axis, k);
      t[k] = {std::cos(ph), std::sin(ph)};
    }
  };
  for (int j = 0; j < my1; ++j) chirp(0, mesh.y_grid.coord(0, j), E1[j]);
  for (int j = 0; j < my2; ++j) chirp(1, mesh.y_grid.coord(1, j), E2[j]);

  // inner M[b1; x2, y2] = sum_{b2} f(b1,b2) W2[x2][b2] E2[y2][b2]
  std::vector<cplx> inner(static_cast<std::size_t>(nb1) * mx2 * my2);
  parallel_for(static_cast<std::size_t>(mx2), [&](std::size_t lo, std::size_t hi) {
    std::vector<cplx> kernel(nb2);
    for (std::size_t x2 = lo; x2 < hi; ++x2)
      for (int y2 = 0; y2 < my2; ++y2) {
        for (int k = 0; k < nb2; ++k) kernel[k] = W2[x2][k] * E2[y2][k];
        for (int b1 = 0; b1 < nb1; ++b1) {
          const cplx* frow = &f.values[static_cast<std::size_t>(b1) * nb2];
          cplx acc{0.0, 0.0};
          for (int k = 0; k < nb2; ++k) acc += frow[k] * kernel[k];
          inner[(static_cast<std::size_t>(b1) * mx2 + x2) * my2 + y2] = acc;
        }
      }
  });

  std::vector<cplx> out(nx * ny);
  parallel_for(static_cast<std::size_t>(mx1), [&](std::size_t lo, std::size_t hi) {
    std::vector<cplx> rowprod(nb1);
    for (std::size_t x1 = lo; x1 < hi; ++x1)
      for (int y1 = 0; y1 < my1; ++y1) {
        for (int k = 0; k < nb1; ++k) rowprod[k] = W1[x1][k] * E1[y1][k];
        for (int x2 = 0; x2 < mx2; ++x2)
          for (int y2 = 0; y2 < my2; ++y2) {
            cplx acc{0.0, 0.0};
            for (int b1 = 0; b1 < nb1; ++b1)
              acc += rowprod[b1] * inner[(static_cast<std::size_t>(b1) * mx2 + x2) * my2 + y2];
            const std::size_t xf = x1 * mx2 + x2;
            const std::size_t yf = static_cast<std::size_t>(y1) * my2 + y2;
            out[xf * ny + yf] = acc * vol;
          }
      }
  });

  // Scalar phase e^{i theta(node)} with theta = (lam/2) tanh(lam/2) xi.eta.
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const auto [xi, eta] = mesh.node(i, j);
      const double theta = 0.5 * tw.lam * tw.tanh_half * xi.dot(eta);
      out[i * ny + j] *= cplx{std::cos(theta), std::sin(theta)};
    }
  return out;
}

SampledField stft_synthesis_on_mesh(const TwistParameter& tw, const ShearedMesh& mesh,
                                    const std::vector<cplx>& coef, const Window& g,
                                    const BoxGrid& out_grid) {
  require_gaussian(g, "stft_synthesis_on_mesh");
  if (coef.size() != mesh.size()) throw ttfa_error("stft_synthesis_on_mesh: size mismatch");
  const int d = out_grid.dim();
  SampledField out(out_grid);
  if (tw.n == 1) {
    const int nb1 = out_grid.npts[0], nb2 = out_grid.npts[1];
    const int mx1 = mesh.x_grid.npts[0], mx2 = mesh.x_grid.npts[1];
    const int my1 = mesh.y_grid.npts[0], my2 = mesh.y_grid.npts[1];
    const std::size_t ny = mesh.y_grid.size();

    std::vector<std::vector<cplx>> W1(mx1), W2(mx2), E1(my1), E2(my2);
    for (int i = 0; i < mx1; ++i)
      window_axis_vector(g, out_grid, 0, mesh.x_grid.coord(0, i), 0.0, W1[i]);
    for (int i = 0; i < mx2; ++i)
      window_axis_vector(g, out_grid, 1, mesh.x_grid.coord(1, i), 0.0, W2[i]);
    auto chirp = [&](int axis, double y, std::vector<cplx>& t) {
      t.resize(out_grid.npts[axis]);
      for (int k = 0; k < out_grid.npts[axis]; ++k) {
        const double ph = +y * out_grid.coord(axis, k);  // synthesis: e^{+i b.eta'}
        t[k] = {std::cos(ph), std::sin(ph)};
      }
    };
    for (int j = 0; j < my1; ++j) chirp(0, mesh.y_grid.coord(0, j), E1[j]);
    for (int j = 0; j < my2; ++j) chirp(1, mesh.y_grid.coord(1, j), E2[j]);

    // coef' = coef * weight * e^{-i theta}
    std::vector<cplx> cf(coef.size());
    for (std::size_t i = 0; i < mesh.x_grid.size(); ++i)
      for (std::size_t j = 0; j < ny; ++j) {
        const auto [xi, eta] = mesh.node(i, j);
        const double theta = 0.5 * tw.lam * tw.tanh_half * xi.dot(eta);
        cf[i * ny + j] = coef[i * ny + j] * mesh.node_weight * cplx{std::cos(theta), -std::sin(theta)};
      }

    // T1[x1,y1,x2;b2] = sum_{y2} cf W2?? contract y2 first (E2), then x2 (W2),
    // then y1 (E1), then x1 (W1).
    std::vector<cplx> t1(static_cast<std::size_t>(mx1) * my1 * mx2 * nb2, cplx{0, 0});
    for (int x1 = 0; x1 < mx1; ++x1)
      for (int x2 = 0; x2 < mx2; ++x2)
        for (int y1 = 0; y1 < my1; ++y1) {
          cplx* dst = &t1[((static_cast<std::size_t>(x1) * my1 + y1) * mx2 + x2) * nb2];
          for (int y2 = 0; y2 < my2; ++y2) {
            const cplx c = cf[(static_cast<std::size_t>(x1) * mx2 + x2) * ny +
                              static_cast<std::size_t>(y1) * my2 + y2];
            if (std::abs(c) == 0.0) continue;
            const cplx* e2 = E2[y2].data();
            for (int k = 0; k < nb2; ++k) dst[k] += c * e2[k];
          }
        }
    std::vector<cplx> t2(static_cast<std::size_t>(mx1) * my1 * nb2, cplx{0, 0});
    for (int x1 = 0; x1 < mx1; ++x1)
      for (int y1 = 0; y1 < my1; ++y1) {
        cplx* dst = &t2[(static_cast<std::size_t>(x1) * my1 + y1) * nb2];
        for (int x2 = 0; x2 < mx2; ++x2) {
          const cplx* src = &t1[((static_cast<std::size_t>(x1) * my1 + y1) * mx2 + x2) * nb2];
          const cplx* w2 = W2[x2].data();
          for (int k = 0; k < nb2; ++k) dst[k] += src[k] * w2[k];
        }
      }
    std::vector<cplx> t3(static_cast<std::size_t>(mx1) * nb1 * nb2, cplx{0, 0});
    for (int x1 = 0; x1 < mx1; ++x1)
      for (int y1 = 0; y1 < my1; ++y1) {
        const cplx* src = &t2[(static_cast<std::size_t>(x1) * my1 + y1) * nb2];
        const cplx* e1 = E1[y1].data();
        for (int b1 = 0; b1 < nb1; ++b1) {
          cplx* dst = &t3[(static_cast<std::size_t>(x1) * nb1 + b1) * nb2];
          const cplx c = e1[b1];
          for (int k = 0; k < nb2; ++k) dst[k] += c * src[k];
        }
      }
    for (int x1 = 0; x1 < mx1; ++x1)
      for (int b1 = 0; b1 < nb1; ++b1) {
        const cplx* src = &t3[(static_cast<std::size_t>(x1) * nb1 + b1) * nb2];
        const cplx w = W1[x1][b1];
        cplx* dst = &out.values[static_cast<std::size_t>(b1) * nb2];
        for (int k = 0; k < nb2; ++k) dst[k] += w * src[k];
      }
    return out;
  }

  // Generic fallback.
  std::vector<double> b(d);
  const std::size_t ny = mesh.y_grid.size();
  for (std::size_t i = 0; i < mesh.x_grid.size(); ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const cplx c0 = coef[i * ny + j];
      if (std::abs(c0) == 0.0) continue;
      const auto [xi, eta] = mesh.node(i, j);
      const KernelFrame fr = kernel_frame(tw, xi, eta);
      const cplx c = c0 * mesh.node_weight * cexp(cplx{0.0, -fr.theta});
      for (std::size_t m = 0; m < out.values.size(); ++m) {
        out_grid.point(m, b);
        double e = 0.0, ph = 0.0;
        for (int a = 0; a < d; ++a) {
          const double dd = b[a] - g.mu[a] - fr.xi_p[a];
          e += g.alpha[a] * dd * dd;
          ph += b[a] * fr.eta_p[a];
        }
        out.values[m] += c * g.amp * std::exp(-e) * cplx{std::cos(ph), std::sin(ph)};
      }
    }
  return out;
}

double mesh_l2_sq(const ShearedMesh& mesh, const std::vector<cplx>& coef) {
  std::vector<double> terms(coef.size());
  for (std::size_t i = 0; i < coef.size(); ++i) terms[i] = std::norm(coef[i]);
  return pairwise_sum<double>(terms) * mesh.node_weight;
}

std::vector<VecXc> mesh_zeta_nodes(const ShearedMesh& mesh) {
  const std::size_t ny = mesh.y_grid.size();
  std::vector<VecXc> nodes(mesh.size());
  for (std::size_t i = 0; i < mesh.x_grid.size(); ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const auto [xi, eta] = mesh.node(i, j);
      VecXc z(xi.size());
      for (Eigen::Index a = 0; a < xi.size(); ++a) z[a] = cplx{xi[a], eta[a]};
      nodes[i * ny + j] = std::move(z);
    }
  return nodes;
}

double fock_mass_on_mesh(const TwistParameter& tw, const SampledField& f, const ShearedMesh& mesh) {
  const std::vector<cplx> wb = weighted_bargmann_at(tw, f, mesh_zeta_nodes(mesh));
  return std::pow(4.0, tw.n) * mesh_l2_sq(mesh, wb);
}

cplx fock_inner_on_mesh(const TwistParameter& tw, const SampledField& f, const SampledField& g,
                        const ShearedMesh& mesh) {
  const std::vector<VecXc> nodes = mesh_zeta_nodes(mesh);
  const std::vector<cplx> wf = weighted_bargmann_at(tw, f, nodes);
  const std::vector<cplx> wg = weighted_bargmann_at(tw, g, nodes);
  std::vector<cplx> terms(wf.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = wf[i] * std::conj(wg[i]);
  return pairwise_sum<cplx>(terms) * mesh.node_weight * std::pow(4.0, tw.n);
}

cplx fock_kernel_pair_on_mesh(const TwistParameter& tw, const SampledField& f,
                              const ShearedMesh& mesh, const VecXc& zeta, double d_n) {
  const std::vector<VecXc> nodes = mesh_zeta_nodes(mesh);
  const std::vector<cplx> wf = weighted_bargmann_at(tw, f, nodes);
  std::vector<cplx> terms(wf.size());
  for (std::size_t i = 0; i < terms.size(); ++i)
    terms[i] = wf[i] * std::conj(reproducing_kernel_weighted(tw, zeta, nodes[i], d_n));
  return pairwise_sum<cplx>(terms) * mesh.node_weight * std::pow(4.0, tw.n);
}

double m_lambda_norm(const TwistParameter& tw, const SampledField& f, const Window& g,
                     const MixedNormSpec& spec, const BoxGrid& xi_grid, const BoxGrid& eta_grid,
                     StftMode mode) {
  if (!spec.valid()) throw ttfa_error("m_lambda_norm: p,q must be in [1, inf]");
  const PhaseField V = twisted_stft(tw, f, g, xi_grid, eta_grid, mode);
  return mixed_norm_lpq(V, spec);
}

WindowEquivalenceReport window_equivalence_ratio(const TwistParameter& tw, const SampledField& f,
                                                 const Window& g, const Window& gprime,
                                                 const MixedNormSpec& spec, const BoxGrid& xi_grid,
                                                 const BoxGrid& eta_grid, double d_n) {
  if (l2_norm(g.samples) == 0.0 || l2_norm(gprime.samples) == 0.0)
    throw ttfa_error("window_equivalence_ratio: zero window");
  WindowEquivalenceReport rep;
  const double n_g = m_lambda_norm(tw, f, g, spec, xi_grid, eta_grid);
  const double n_gp = m_lambda_norm(tw, f, gprime, spec, xi_grid, eta_grid);
  rep.ratio = n_gp / n_g;
  const double v11 = m_lambda_norm(tw, gprime.samples, g, MixedNormSpec{1.0, 1.0}, xi_grid, eta_grid);
  const double g2 = l2_norm(g.samples);
  rep.bound = tw.c_lam * tw.c_lam * v11 / (d_n * g2 * g2);
  rep.pass = rep.ratio <= rep.bound * (1.0 + 1e-3);
  return rep;
}

InclusionReport inclusion_check(const TwistParameter& tw, const SampledField& f, const Window& g,
                                const MixedNormSpec& spec1, const MixedNormSpec& spec2,
                                const BoxGrid& xi_grid, const BoxGrid& eta_grid, double d_n) {
  if (!(spec1.p <= spec2.p) || !(spec1.q <= spec2.q))
    throw ttfa_error("inclusion_check: need p1 <= p2 and q1 <= q2");
  InclusionReport rep;
  auto conj_exp = [](double a, double b) {
    // 1/a + 1/r = 1 + 1/b  ->  r = 1 / (1 + 1/b - 1/a)
    const double inv = 1.0 + (std::isinf(b) ? 0.0 : 1.0 / b) - (std::isinf(a) ? 0.0 : 1.0 / a);
    return inv <= 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / inv;
  };
  rep.r = conj_exp(spec1.p, spec2.p);
  rep.s = conj_exp(spec1.q, spec2.q);
  rep.lhs = m_lambda_norm(tw, f, g, spec2, xi_grid, eta_grid);
  const double n1 = m_lambda_norm(tw, f, g, spec1, xi_grid, eta_grid);
  const double nrs = m_lambda_norm(tw, g.samples, g, MixedNormSpec{rep.r, rep.s}, xi_grid, eta_grid);
  const double g2 = l2_norm(g.samples);
  rep.bound = tw.c_lam * tw.c_lam / (d_n * g2 * g2) * n1 * nrs;
  rep.pass = rep.lhs <= rep.bound * (1.0 + 1e-3);
  return rep;
}

AlgebraReport twisted_algebra_check(const TwistParameter& tw, const SampledField& f,
                                    const SampledField& g, double p, const Window& h,
                                    const BoxGrid& xi_grid, const BoxGrid& eta_grid,
                                    double c_registry) {
  if (!(p >= 1.0 && p <= 2.0)) throw ttfa_error("twisted_algebra_check: p must be in [1,2]");
  AlgebraReport rep;
  const SampledField fg = twisted_convolve(tw, f, g, ConvMode::fast);

  rep.young_lhs = lp_norm(fg, p);
  // Under the t-con normalization the sharp Young constant is
  // (2 pi / |lam|)^{n(1-1/p)} (equal to 1 only for p = 1).
  const double young_c =
      tw.lam == 0.0 && p > 1.0
          ? std::numeric_limits<double>::infinity()
          : std::pow(2.0 * kPi / std::abs(tw.lam == 0.0 ? 1.0 : tw.lam), tw.n * (1.0 - 1.0 / p));
  rep.young_constant = p == 1.0 ? 1.0 : young_c;
  rep.young_rhs = rep.young_constant * lp_norm(f, p) * lp_norm(g, p);

  const MixedNormSpec pp{p, p};
  rep.banach_lhs = m_lambda_norm(tw, fg, h, pp, xi_grid, eta_grid);
  rep.banach_rhs = c_registry * m_lambda_norm(tw, f, h, pp, xi_grid, eta_grid) *
                   m_lambda_norm(tw, g, h, pp, xi_grid, eta_grid);

  // Factorization <f *_lam g, Pi_lam(xi,eta) h> = (f_eta *_lam G_eta)(xi) on
  // the base lattice for a few eta.
  const BoxGrid& bg = f.grid;
  const int d = bg.dim();
  double supd = 0.0, scale = 0.0;
  for (double e1 : {0.0, 0.8}) {
    VecXd eta = VecXd::Zero(d);
    eta[0] = e1;
    eta[d - 1] = -0.5 * e1;

    SampledField f_eta = f;
    {
      std::vector<int> idx(d);
      std::vector<double> xp(d);
      for (std::size_t i = 0; i < f_eta.values.size(); ++i) {
        bg.point(i, xp);
        double dot = 0.0;
        for (int a = 0; a < d; ++a) dot += xp[a] * eta[a];
        const double ph = 0.5 * tw.lam_coth_lam * dot;
        f_eta.values[i] *= cplx{std::cos(ph), std::sin(ph)};
      }
    }

    std::vector<std::pair<VecXd, VecXd>> nodes;
    nodes.reserve(bg.size());
    std::vector<double> xp(d);
    for (std::size_t i = 0; i < bg.size(); ++i) {
      bg.point(i, xp);
      nodes.emplace_back(Eigen::Map<const VecXd>(xp.data(), d), eta);
    }
    const std::vector<cplx> vg = twisted_stft_at(tw, g, h, nodes, StftMode::fast);
    SampledField big_g(bg);
    for (std::size_t i = 0; i < bg.size(); ++i) {
      bg.point(i, xp);
      double dot = 0.0;
      for (int a = 0; a < d; ++a) dot += xp[a] * eta[a];
      const double ph = -0.5 * tw.lam_coth_lam * dot;
      big_g.values[i] = vg[i] * cplx{std::cos(ph), std::sin(ph)};  // <g, Pi h> = e^{-i phi} V_h g
    }
    const SampledField rhs = twisted_convolve(tw, f_eta, big_g, ConvMode::fast);

    const std::vector<cplx> vfg = twisted_stft_at(tw, fg, h, nodes, StftMode::fast);
    for (std::size_t i = 0; i < bg.size(); ++i) {
      bg.point(i, xp);
      double dot = 0.0;
      for (int a = 0; a < d; ++a) dot += xp[a] * eta[a];
      const double ph = -0.5 * tw.lam_coth_lam * dot;
      const cplx lhs = vfg[i] * cplx{std::cos(ph), std::sin(ph)};
      supd = std::max(supd, std::abs(lhs - rhs.values[i]));
      scale = std::max(scale, std::abs(lhs));
    }
  }
  rep.factorization_sup = scale > 0.0 ? supd / scale : supd;

  rep.pass = rep.young_lhs <= rep.young_rhs * (1.0 + 1e-9) &&
             rep.banach_lhs <= rep.banach_rhs * (1.0 + 1e-3) && rep.factorization_sup < 1e-6;
  return rep;
}

}  // namespace ttfa
