#include <cmath>

#include "ttfa/heisenberg.hpp"
#include "ttfa/suites.hpp"

namespace ttfa {

namespace {

double sup_abs(const SampledField& a) {
  double m = 0.0;
  for (const cplx& z : a.values) m = std::max(m, std::abs(z));
  return m;
}

double sup_diff(const SampledField& a, const SampledField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

double sup_h(const HeisenbergField& a) {
  double m = 0.0;
  for (const cplx& v : a.values) m = std::max(m, std::abs(v));
  return m;
}

double sup_diff_h(const HeisenbergField& a, const HeisenbergField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

VecXc zvec(double a, double b, double c, double d) {
  VecXc z(2);
  z << cplx{a, c}, cplx{b, d};
  return z;
}

}  // namespace

// ---------------------------------------------------------------------------
// fock
// ---------------------------------------------------------------------------
void fock_suite(const SuiteConfig& cfg, SuiteReport& rep, ConstantsRegistry& reg) {
  const int n = cfg.n;
  const BoxGrid grid = cfg.base_grid();
  const double d_n = reg.get("d_n_repker");

  {
    const TwistParameter tw(1.0, n);
    rep.add_relative("w.at_zero", "w_lambda(0) = c_lambda", 1.0, "", 
                     weight_w_lambda(tw, VecXc(VecXc::Zero(2 * n))), tw.c_lam, 1e-14);
    if (n == 1) {
      rep.add_relative("w.spot", "w_1((1,0)) = c_1 e^{-coth(1)/2}", 1.0, "",
                       weight_w_lambda(tw, zvec(1, 0, 0, 0)),
                       std::exp(-0.5 / std::tanh(1.0)) / (4.0 * kPi * std::sinh(1.0)), 1e-10);
    }
    FixtureRng rng(cfg.seed + 20);
    double werr = 0.0;
    for (int t = 0; t < 4; ++t) {
      VecXc z(2 * n);
      for (int a = 0; a < 2 * n; ++a) z[a] = cplx{rng.uniform(-2, 2), rng.uniform(-2, 2)};
      werr = std::max(werr, std::abs(weight_w_lambda(tw, VecXc(cplx{0, -1} * z)) /
                                         weight_w_lambda(tw, z) - 1.0));
    }
    rep.add_inequality("w.rotation_invariance", "w(-i zeta) = w(zeta)", 1.0, "", werr, 1e-12, 0.0);
  }

  for (double lam : cfg.lambda_list) {
    const TwistParameter tw(lam, n);
    const SampledField p = heat_kernel_field(tw, 0.5, grid);
    FixtureRng rng(cfg.seed + 21);
    double perr = 0.0;
    for (int t = 0; t < 5; ++t) {
      const VecXc z = zvec(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-1.5, 1.5),
                           rng.uniform(-1.5, 1.5));
      perr = std::max(perr, std::abs(bargmann_at(tw, p, {z})[0] - tw.c_lam) / tw.c_lam);
    }
    rep.add_inequality("bargmann.heat_constant", "B p_{1/2} = c_lambda", lam, "", perr, 1e-7, 0.0);
  }

  for (double lam : {0.25, 1.0, 3.0}) {
    const TwistParameter tw(lam, n);
    const Window w = Window::heat_half(tw, grid);
    const SampledField f = random_field(grid, cfg.seed + 22, 2);
    const ShearedMesh mesh = default_sheared_mesh(tw, f, w);
    const double nf = l2_norm(f);
    rep.add_relative("bargmann.isometry", "||B f||_F = ||f||_2", lam, "",
                     fock_mass_on_mesh(tw, f, mesh), nf * nf, 1e-5);
  }

  {
    const TwistParameter tw(1.0, n);
    const Window w = Window::heat_half(tw, grid);
    const SampledField f = random_field(grid, cfg.seed + 23, 2);
    const SampledField g = random_field(grid, cfg.seed + 24, 1);
    SampledField sum = f;
    for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += g.values[i];
    const ShearedMesh mesh = default_sheared_mesh(tw, sum, w);
    const cplx lhs = fock_inner_on_mesh(tw, f, g, mesh);
    const cplx rhs = inner_product(f, g);
    rep.add_inequality("bargmann.inner", "<B f, B g>_F = <f, g>", 1.0, "",
                       std::abs(lhs - rhs), 1e-5 * l2_norm(f) * l2_norm(g), 0.0);

    // reproducing property at interior points with the registry d_n
    FixtureRng rng(cfg.seed + 25);
    double rerr = 0.0;
    for (int t = 0; t < 5; ++t) {
      const VecXc z = zvec(rng.uniform(-1.4, 1.4), rng.uniform(-1.4, 1.4),
                           rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      const cplx direct = bargmann_at(tw, f, {z})[0];
      const cplx pair = fock_kernel_pair_on_mesh(tw, f, default_sheared_mesh(tw, f, w), z, d_n);
      rerr = std::max(rerr, std::abs(pair - direct) / std::abs(direct));
    }
    rep.add_inequality("fock.reproducing", "<B f, K_zeta> = B f(zeta) (rep-ker)", 1.0,
                       "5 interior points", rerr, 1e-4, 0.0);

    VecXc z1 = zvec(0.8, -0.5, 0.3, 0.7), z2 = zvec(-1.1, 0.2, -0.6, 0.4);
    rep.add_inequality("fock.kernel_hermitian", "K_z(z') = conj(K_z'(z))", 1.0, "",
                       std::abs(reproducing_kernel(tw, z1, z2, d_n) -
                                std::conj(reproducing_kernel(tw, z2, z1, d_n))),
                       1e-12, 0.0);
  }

  // matrix-bargmann ratio constancy and its c_lambda scaling
  {
    std::vector<double> consts;
    for (double lam : cfg.lambda_list) {
      const TwistParameter tw(lam, n);
      const SampledField p = heat_kernel_field(tw, 0.5, grid);
      const SampledField f = random_field(grid, cfg.seed + 26, 2);
      FixtureRng rng(cfg.seed + 27);
      for (int t = 0; t < 3; ++t) {
        VecXd xi(2 * n), eta(2 * n);
        for (int a = 0; a < 2 * n; ++a) {
          xi[a] = rng.uniform(-1.5, 1.5);
          eta[a] = rng.uniform(-1.5, 1.5);
        }
        const cplx mc = inner_product(f, rep_pi_lambda(tw, xi, eta, p)) * std::sqrt(tw.c_lam);
        VecXc z(2 * n);
        for (int a = 0; a < 2 * n; ++a) z[a] = cplx{xi[a], eta[a]};
        const cplx wb = weighted_bargmann_at(tw, f, {z})[0];
        consts.push_back((wb / mc).real());
      }
    }
    double cerr = 0.0;
    for (double c : consts) cerr = std::max(cerr, std::abs(c - consts.front()));
    rep.add_inequality("fock.matrix_bargmann",
                       "d_n sqrt(c_lam) <f, Pi p_{1/2}> = B f sqrt(w) (matrix-barg)", 0.0,
                       "constant over points, f, lambda", cerr, 1e-4 * std::abs(consts.front()),
                       0.0);
  }

  // U_lambda and the Fock rotation
  {
    const TwistParameter tw0(1e-9, n);
    SampledField gauss(grid);
    gauss.fill([](std::span<const double> x) {
      double r2 = 0.0;
      for (double c : x) r2 += c * c;
      return std::exp(-0.5 * r2);
    });
    rep.add_inequality("u_lambda.fourier_limit", "U_0 is the Fourier transform (intertwine)", 0.0,
                       "gaussian fixed point", sup_diff(u_lambda_apply(tw0, gauss), gauss), 1e-8,
                       0.0);
    for (double lam : cfg.lambda_list) {
      if (lam > 1.25) continue;  // band-limited route: coverage bound on the desk grid
      const TwistParameter tw(lam, n);
      const SampledField p = heat_kernel_field(tw, 0.5, grid);
      rep.add_inequality("u_lambda.heat_fixed_point", "U_lambda p_{1/2} = p_{1/2}", lam, "",
                         sup_diff(u_lambda_apply(tw, p), p), 1e-6 * sup_abs(p), 0.0);
      const SampledField f = random_tight_field(grid, cfg.seed + 28);
      rep.add_relative("u_lambda.unitary", "U_lambda preserves L^2", lam, "",
                       l2_norm(u_lambda_apply(tw, f)), l2_norm(f), 1e-6);
      FixtureRng rng(cfg.seed + 29);
      double ierr = 0.0;
      const SampledField uf = u_lambda_apply(tw, f);
      for (int t = 0; t < 3; ++t) {
        const VecXc z = zvec(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5),
                             rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2));
        const cplx lhs = bargmann_at(tw, uf, {z})[0];
        const cplx rhs = bargmann_at(tw, f, {VecXc(cplx{0, -1} * z)})[0];
        ierr = std::max(ierr, std::abs(lhs - rhs) / std::abs(rhs));
      }
      rep.add_inequality("u_lambda.intertwine", "B(U_lambda f)(z) = B f(-i z)", lam, "", ierr,
                         1e-5, 0.0);
    }

    const TwistParameter tw(1.0, n);
    const BoxGrid ph = BoxGrid::cube(2 * n, 12, 4.0);
    const SampledField f = random_tight_field(grid, cfg.seed + 30);
    const FockField F = bargmann_transform(tw, f, ph, ph);
    const FockField r4 = fock_rotate(fock_rotate(fock_rotate(fock_rotate(F))));
    double r4err = 0.0;
    for (std::size_t i = 0; i < F.values.size(); ++i)
      r4err = std::max(r4err, std::abs(r4.values[i] - F.values[i]));
    rep.add_inequality("fock_rotate.order_four", "U^4 = id (exact permutation)", 1.0, "", r4err,
                       0.0, 0.0);
    double s0 = 0.0, s1 = 0.0;
    const FockField r1 = fock_rotate(F);
    for (std::size_t i = 0; i < F.values.size(); ++i) {
      s0 += std::norm(F.values[i]);
      s1 += std::norm(r1.values[i]);
    }
    rep.add_relative("fock_rotate.mass", "value mass preserved by the permutation", 1.0, "", s1,
                     s0, 1e-14);

    const VecXc z0 = zvec(0.6, -0.4, 0.3, 0.5);
    const FockField lhs = fock_rotate(rho_apply(tw, z0, F));
    const FockField rhs = rho_apply(tw, VecXc(cplx{0, 1} * z0), fock_rotate(F));
    double m = 0.0, scale = 0.0;
    std::vector<int> idx(2 * n);
    for (std::size_t i = 0; i < lhs.n_xi(); ++i)
      for (std::size_t j = 0; j < lhs.n_eta(); ++j) {
        bool wrap = false;
        lhs.xi_grid.unflat(i, idx);
        for (int a = 0; a < 2 * n; ++a) wrap |= idx[a] == 0;
        lhs.eta_grid.unflat(j, idx);
        for (int a = 0; a < 2 * n; ++a) wrap |= idx[a] == 0;
        if (wrap) continue;
        const double rw = std::sqrt(weight_w_lambda(tw, lhs.zeta_at(i, j)));
        m = std::max(m, std::abs(lhs.at(i, j) - rhs.at(i, j)) * rw);
        scale = std::max(scale, std::abs(rhs.at(i, j)) * rw);
      }
    rep.add_inequality("fock_rotate.rho_conjugation", "U rho(z) U^* = rho(i z)", 1.0,
                       "weighted sup off wrap rows", m, 1e-7 * scale, 0.0);

    // rho: identity, tau conjugation, unitarity
    const FockField rid = rho_apply(tw, VecXc(VecXc::Zero(2 * n)), F);
    double iderr = 0.0;
    for (std::size_t i = 0; i < F.values.size(); ++i)
      iderr = std::max(iderr, std::abs(rid.values[i] - F.values[i]));
    rep.add_inequality("rho.identity", "rho(0) = id", 1.0, "", iderr, 1e-12, 0.0);

    VecXd xi0(2 * n);
    xi0.setZero();
    xi0[0] = 0.9;
    xi0[2 * n - 1] = -0.6;
    const FockField tau_lhs = rho_apply(tw, VecXc(xi0.cast<cplx>()), F);
    const FockField tau_rhs = bargmann_transform(tw, twisted_translate(tw, xi0, f), ph, ph);
    double terr = 0.0, tscale = 0.0;
    for (std::size_t i = 0; i < tau_lhs.n_xi(); ++i)
      for (std::size_t j = 0; j < tau_lhs.n_eta(); ++j) {
        const double rw = std::sqrt(weight_w_lambda(tw, tau_lhs.zeta_at(i, j)));
        terr = std::max(terr, std::abs(tau_lhs.at(i, j) - tau_rhs.at(i, j)) * rw);
        tscale = std::max(tscale, std::abs(tau_rhs.at(i, j)) * rw);
      }
    rep.add_inequality("rho.tau_conjugation", "B^* rho(xi_0) B = tau_lambda(xi_0) (Prop 3.1)", 1.0,
                       "", terr, 1e-6 * tscale, 0.0);

    const Window w = Window::heat_half(tw, grid);
    const SampledField pif = rep_pi_lambda(tw, z0.real(), z0.imag(), f);
    rep.add_relative("rho.unitary", "Fock norm preserved by rho(zeta)", 1.0, "",
                     fock_mass_on_mesh(tw, pif, default_sheared_mesh(tw, pif, w)),
                     fock_mass_on_mesh(tw, f, default_sheared_mesh(tw, f, w)), 1e-5);
  }

  // ladder identities
  {
    const TwistParameter tw(1.0, n);
    const SampledField p = heat_kernel_field(tw, 0.5, grid);
    const double a = tw.c_half;
    const double rate = heat_kernel_rate(tw, 0.5);
    const SampledField ap = ladder_apply(tw, 0, LadderOp::A, p);
    double aerr = 0.0;
    std::vector<double> x(2 * n);
    for (std::size_t i = 0; i < ap.values.size(); ++i) {
      grid.point(i, x);
      aerr = std::max(aerr, std::abs(ap.values[i] - (-2.0 * rate - a) * x[0] * p.values[i]));
    }
    rep.add_inequality("ladder.gaussian_closed_form", "A_j p in closed form", 1.0, "", aerr,
                       1e-6 * sup_abs(p), 0.0);

    const SampledField f = random_field(grid, cfg.seed + 31, 2);
    const cplx b{0.0, 0.5 * tw.lam};
    const cplx denom = cplx{a * a, 0.0} + b * b;
    const SampledField af = ladder_apply(tw, 0, LadderOp::A, f);
    const SampledField bf = ladder_apply(tw, 0, LadderOp::B, f);
    FixtureRng rng(cfg.seed + 32);
    double zerr = 0.0, werr2 = 0.0;
    for (int t = 0; t < 5; ++t) {
      const VecXc z = zvec(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2),
                           rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9));
      const cplx bfz = bargmann_at(tw, f, {z})[0];
      SampledField ca(grid), cb(grid);
      for (std::size_t i = 0; i < ca.values.size(); ++i) {
        ca.values[i] = a * af.values[i] - b * bf.values[i];
        cb.values[i] = b * af.values[i] + a * bf.values[i];
      }
      zerr = std::max(zerr, std::abs(-denom * z[0] * bfz - bargmann_at(tw, ca, {z})[0]) /
                                std::abs(denom * z[0] * bfz));
      werr2 = std::max(werr2, std::abs(denom * z[n] * bfz - bargmann_at(tw, cb, {z})[0]) /
                                  std::abs(denom * z[n] * bfz));
    }
    rep.add_inequality("ladder.z_identity", "-(a^2+b^2) z_j B f = B((a A_j - b B_j) f)", 1.0,
                       "5 interior zeta", zerr, 1e-4, 0.0);
    rep.add_inequality("ladder.w_identity", "(a^2+b^2) w_j B f = B((b A_j + a B_j) f)", 1.0,
                       "5 interior zeta", werr2, 1e-4, 0.0);

    // decay diagnostic: reported, not asserted against a reference
    const BoxGrid ph = BoxGrid::cube(2 * n, 8, 4.0);
    std::vector<VecXc> nodes;
    for (std::size_t i = 0; i < ph.size(); ++i)
      for (std::size_t j = 0; j < ph.size(); ++j) {
        std::vector<double> xi(2 * n), eta(2 * n);
        ph.point(i, xi);
        ph.point(j, eta);
        VecXc z(2 * n);
        for (int c = 0; c < 2 * n; ++c) z[c] = cplx{xi[c], eta[c]};
        nodes.push_back(std::move(z));
      }
    const auto wb = weighted_bargmann_at(tw, f, nodes);
    for (int N : {2, 4}) {
      double bound = 0.0;
      for (std::size_t k = 0; k < nodes.size(); ++k)
        bound = std::max(bound, std::abs(wb[k]) * std::pow(1.0 + nodes[k].norm(), N));
      rep.add_inequality("fock.decay_diagnostic_N" + std::to_string(N),
                         "|B f| sqrt(w) (1+|zeta|)^N bounded (point-barg)", 1.0,
                         "measured bound as lhs", bound, 1e6, 0.0);
    }
  }
}

// ---------------------------------------------------------------------------
// modspace-twisted
// ---------------------------------------------------------------------------
void modspace_suite(const SuiteConfig& cfg, SuiteReport& rep, ConstantsRegistry& reg) {
  const int n = cfg.n;
  const BoxGrid grid = cfg.base_grid();
  const double d_n = reg.get("d_n_orth");

  {
    const TwistParameter tw(1.0, n);
    const Window g = Window::heat_half(tw, grid);
    const double ng = l2_norm(g.samples);
    const cplx peak =
        twisted_stft_at(tw, g.samples, g, {{VecXd::Zero(2 * n), VecXd::Zero(2 * n)}},
                        StftMode::fast)[0];
    rep.add_relative("tstft.peak", "V_g g(0,0) = ||g||_2^2", 1.0, "", peak.real(), ng * ng, 1e-9);
  }

  // twisted Plancherel with one direct-mode cross check
  for (double lam : cfg.lambda_list) {
    const TwistParameter tw(lam, n);
    const Window g = Window::heat_half(tw, grid);
    const SampledField f = random_field(grid, cfg.seed + 40, 2);
    const ShearedMesh mesh = default_sheared_mesh(tw, f, g);
    const auto vals = twisted_stft_on_mesh(tw, f, g, mesh, StftMode::fast);
    const double nf = l2_norm(f), ng = l2_norm(g.samples);
    rep.add_relative("tstft.plancherel",
                     "||V_g f||_2^2 = (2 pi)^{2n} (sinh/lam)^{2n} ||f||^2 ||g||^2 (Prop 3.2)", lam,
                     "", mesh_l2_sq(mesh, vals) / (nf * nf * ng * ng),
                     std::pow(2.0 * kPi / tw.lam_over_sinh, 2 * n), 1e-3);
    if (lam == cfg.lambda_list.front()) {
      double derr = 0.0;
      const std::size_t ny = mesh.y_grid.size();
      int used = 0;
      for (std::size_t k = 0; k < 60 && used < 10; ++k) {
        const std::size_t i = (k * 41) % mesh.x_grid.size();
        const std::size_t j = (k * 73) % ny;
        const auto node = mesh.node(i, j);
        if (node.first.cwiseAbs().maxCoeff() > 0.4 * grid.halfw[0]) continue;
        if (tw.tanh_half * node.second.cwiseAbs().maxCoeff() > 0.4 * grid.halfw[0]) continue;
        const cplx oracle = twisted_stft_at(tw, f, g, {node}, StftMode::direct)[0];
        derr = std::max(derr, std::abs(vals[i * ny + j] - oracle));
        ++used;
      }
      rep.add_inequality("tstft.fast_vs_direct", "fast mesh path vs operator oracle", lam,
                         "10 nodes", derr, 1e-6 * nf * ng, 0.0);
    }
  }

  // lambda -> 0 classical limit (Lambda(0) = diag(I, -I))
  {
    const TwistParameter tw0(1e-9, n);
    const SampledField f = random_field(grid, cfg.seed + 41, 2);
    const Window g = Window::heat_half(TwistParameter(1.0, n), grid);
    FixtureRng rng(cfg.seed + 42);
    double cerr = 0.0;
    for (int t = 0; t < 5; ++t) {
      std::vector<int> idx(2 * n);
      VecXd xi(2 * n), eta(2 * n);
      for (int a = 0; a < 2 * n; ++a) {
        idx[a] = rng.uniform_int(grid.npts[a] / 3, 2 * grid.npts[a] / 3);
        xi[a] = grid.coord(a, idx[a]);
        eta[a] = rng.uniform(-2, 2);
      }
      const cplx tval = twisted_stft_at(tw0, f, g, {{xi, eta}}, StftMode::fast)[0];
      const cplx cval = classical_stft_at(f, g.samples, xi, VecXd(-eta));
      cerr = std::max(cerr, std::abs(tval - cval));
    }
    rep.add_inequality("tstft.lambda_zero", "vanishing twist = classical STFT (reflected eta)",
                       0.0, "", cerr, 1e-7 * l2_norm(f) * l2_norm(g.samples), 0.0);
  }

  // inversion + window independence constant
  {
    std::vector<double> constants;
    const Window alt = Window::gaussian(grid, 0.8, std::vector<double>(2 * n, 0.37),
                                        std::vector<double>(2 * n, 0.0));
    for (double lam : cfg.lambda_list) {
      const TwistParameter tw(lam, n);
      for (int wi = 0; wi < 2; ++wi) {
        const Window g = wi == 0 ? Window::heat_half(tw, grid) : alt;
        const SampledField f = random_field(grid, cfg.seed + 43 + wi, 2);
        const ShearedMesh mesh = default_sheared_mesh(tw, f, g, 24, 7.0);
        const auto vals = twisted_stft_on_mesh(tw, f, g, mesh, StftMode::fast);
        const SampledField synth = stft_synthesis_on_mesh(tw, mesh, vals, g, grid);
        const double ng = l2_norm(g.samples), nf = l2_norm(f);
        const double c = tw.c_lam * tw.c_lam * inner_product(synth, f).real() / (ng * ng * nf * nf);
        constants.push_back(c);
        const double scale = c / (tw.c_lam * tw.c_lam) * ng * ng;
        double m = 0.0, sup = 0.0;
        for (std::size_t i = 0; i < f.values.size(); ++i) {
          m = std::max(m, std::abs(synth.values[i] - scale * f.values[i]));
          sup = std::max(sup, std::abs(scale * f.values[i]));
        }
        rep.add_inequality("tstft.inversion_residual",
                           "c_lam^2 Vtilde_g V_g f = d_n ||g||^2 f (invers)", lam,
                           wi == 0 ? "canonical window" : "gaussian window", m, 1e-4 * sup, 0.0);
      }
    }
    double cerr = 0.0;
    for (double c : constants) cerr = std::max(cerr, std::abs(c - constants.front()));
    rep.add_inequality("tstft.inversion_constant",
                       "inversion scalar constant across f, windows, lambda", 0.0, "", cerr,
                       1e-3 * std::abs(constants.front()), 0.0);
  }

  // orthogonality relation
  {
    const TwistParameter tw(0.8, n);
    const Window g = Window::heat_half(tw, grid);
    const Window gp = Window::gaussian(grid, 0.85, std::vector<double>(2 * n, 0.45),
                                       std::vector<double>(2 * n, 0.0));
    std::vector<cplx> ratios;
    for (std::uint64_t s : {0u, 1u, 2u}) {
      const SampledField f = random_field(grid, cfg.seed + 50 + s, 2);
      const SampledField h = random_field(grid, cfg.seed + 60 + s, 1);
      SampledField sum = f;
      for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += h.values[i];
      const ShearedMesh mesh = default_sheared_mesh(tw, sum, g, 24, 7.0);
      const auto vf = twisted_stft_on_mesh(tw, f, g, mesh, StftMode::fast);
      const auto vh = twisted_stft_on_mesh(tw, h, gp, mesh, StftMode::fast);
      cplx pair{0, 0};
      for (std::size_t i = 0; i < vf.size(); ++i) pair += vf[i] * std::conj(vh[i]);
      pair *= mesh.node_weight;
      ratios.push_back(tw.c_lam * tw.c_lam * pair /
                       (inner_product(f, h) * inner_product(gp.samples, g.samples)));
    }
    double oerr = 0.0;
    for (const cplx r : ratios) oerr = std::max(oerr, std::abs(r - ratios.front()));
    rep.add_inequality("tstft.orthogonality",
                       "c_lam^2 <V_g f, V_g' h> = d_n <f,h><g',g> (orthogonality relation)",
                       0.8, "3 quadruples", oerr, 1e-4 * std::abs(ratios.front()), 0.0);
  }

  // m-norms: Plancherel value, invariances, classical (p,p) agreement
  {
    const TwistParameter tw(1.0, n);
    const Window g = Window::heat_half(tw, grid);
    const SampledField f = random_field(grid, cfg.seed + 70, 2);
    const ShearedMesh mesh = default_sheared_mesh(tw, f, g);
    const auto vals = twisted_stft_on_mesh(tw, f, g, mesh, StftMode::fast);
    rep.add_relative("mnorm.plancherel_22",
                     "||f||_{(2,2)} = sqrt((2pi)^{2n}(sinh/lam)^{2n}) ||f|| ||g||", 1.0, "p=q=2",
                     std::sqrt(mesh_l2_sq(mesh, vals)),
                     std::pow(2.0 * kPi / tw.lam_over_sinh, n) * l2_norm(f) * l2_norm(g.samples),
                     1e-4);

    for (double p : {1.0, 2.0}) {
      std::vector<double> terms(vals.size());
      for (std::size_t i = 0; i < vals.size(); ++i) terms[i] = std::pow(std::abs(vals[i]), p);
      const double twisted_mass = pairwise_sum<double>(terms) * mesh.node_weight;
      const PhaseField V = classical_stft(f, g.samples);
      std::vector<double> ct(V.values.size());
      for (std::size_t i = 0; i < ct.size(); ++i) ct[i] = std::pow(std::abs(V.values[i]), p);
      const double classical_mass =
          pairwise_sum<double>(ct) * V.xi_grid.cell_volume() * V.eta_grid.cell_volume();
      rep.add_relative("mnorm.classical_pp",
                       "M_lambda^{p,p} = M^{p,p} via |det Lambda|^{-1} (matrix-coeff)", 1.0,
                       "p=" + std::to_string(p).substr(0, 3), twisted_mass,
                       classical_mass / lambda_matrix_det_closed_form(tw), 1e-4);
    }
  }
  {
    const TwistParameter tw(0.5, n);
    const Window g = Window::heat_half(tw, grid);
    const BoxGrid ph = BoxGrid::cube(2 * n, 26, 8.5);
    FixtureRng frng(cfg.seed + 71);
    const SampledField f = sample_mixture(random_mixture(frng, 2 * n, 2, 1.0, 0.95, 1.2, 0.6), grid);
    const MixedNormSpec spec{1.0, 2.0};
    const double base = m_lambda_norm(tw, f, g, spec, ph, ph);
    VecXd xi0 = VecXd::Zero(2 * n), eta0 = VecXd::Zero(2 * n);
    xi0[0] = 0.5;
    eta0[2 * n - 1] = -0.4;
    rep.add_relative("mnorm.tau_invariance", "||tau_lambda(xi0) f||_{(p,q)} = ||f||_{(p,q)}", 0.5,
                     "p=1,q=2", m_lambda_norm(tw, twisted_translate(tw, xi0, f), g, spec, ph, ph),
                     base, 1e-4);
    rep.add_relative("mnorm.e_invariance", "||e_lambda(eta0) f||_{(p,q)} = ||f||_{(p,q)}", 0.5,
                     "p=1,q=2", m_lambda_norm(tw, twisted_modulate(tw, eta0, f), g, spec, ph, ph),
                     base, 1e-4);
    const SampledField ft = random_tight_field(grid, cfg.seed + 72);
    const MixedNormSpec pp{1.5, 1.5};
    rep.add_relative("mnorm.u_invariance", "p = q norms invariant under U_lambda", 0.5,
                     "p=q=1.5", m_lambda_norm(tw, u_lambda_apply(tw, ft), g, pp, ph, ph),
                     m_lambda_norm(tw, ft, g, pp, ph, ph), 1e-4);
  }

  // window equivalence / inclusion / algebra / pointwise bound
  {
    const TwistParameter tw(1.0, n);
    const BoxGrid ph = BoxGrid::cube(2 * n, 20, 6.0);
    const SampledField f = random_field(grid, cfg.seed + 73, 2);
    const Window g = Window::heat_half(tw, grid);

    const auto same = window_equivalence_ratio(tw, f, g, g, {2, 2}, ph, ph, d_n);
    rep.add_inequality("window.same", "g' = g: ratio 1 <= bound (independence)", 1.0, "",
                       same.ratio, same.bound, 1e-3);
    const double alpha = heat_kernel_rate(tw, 0.5) / 2.25;
    const Window gd = Window::gaussian(grid, heat_kernel_prefactor(tw, 0.5),
                                       std::vector<double>(2 * n, alpha),
                                       std::vector<double>(2 * n, 0.0));
    const auto dil = window_equivalence_ratio(tw, f, g, gd, {2, 2}, ph, ph, d_n);
    rep.add_inequality("window.dilated", "dilated window ratio <= bound (independence)", 1.0, "",
                       dil.ratio, dil.bound, 1e-3);
    Window g2 = g;
    g2.amp *= 2.0;
    for (auto& v : g2.samples.values) v *= 2.0;
    const auto dbl = window_equivalence_ratio(tw, f, g, g2, {1, 2}, ph, ph, d_n);
    rep.add_relative("window.homogeneity", "g' = 2g: ratio exactly 2", 1.0, "", dbl.ratio, 2.0,
                     1e-12);

    const auto inc = inclusion_check(tw, f, g, {1, 1}, {2, 2}, ph, ph, d_n);
    rep.add_inequality("inclusion.11_22", "M^{1,1} in M^{2,2} (Young bound)", 1.0,
                       "r=s=2", inc.lhs, inc.bound, 1e-3);
    const auto deg = inclusion_check(tw, f, g, {2, 2}, {2, 2}, ph, ph, d_n);
    rep.add_inequality("inclusion.degenerate", "equal exponents reduce to inversion", 1.0,
                       "r=s=1", deg.lhs, deg.bound, 1e-3);

    const SampledField g1 = random_field(grid, cfg.seed + 74, 1);
    for (double p : {1.0, 2.0}) {
      const double c_alg = reg.get("algebra_C_p" + std::to_string(p).substr(0, 1));
      const auto alg = twisted_algebra_check(tw, f, g1, p, g, ph, ph, c_alg);
      rep.add_inequality("algebra.young", "||f *_lam g||_p <= C_p(lam) ||f||_p ||g||_p (curious)",
                         1.0, "p=" + std::to_string(p).substr(0, 3), alg.young_lhs, alg.young_rhs,
                         1e-9);
      rep.add_inequality("algebra.banach",
                         "||f *_lam g||_{(p,p)} <= C ||f||_{(p,p)} ||g||_{(p,p)}", 1.0,
                         "p=" + std::to_string(p).substr(0, 3), alg.banach_lhs, alg.banach_rhs,
                         1e-3);
      rep.add_inequality("algebra.factorization",
                         "<f *_lam g, Pi h> = f_eta *_lam G_eta (proof identity)", 1.0, "",
                         alg.factorization_sup, 1e-6, 0.0);
    }

    // pointwise synthesis-analysis bound
    const Window h = Window::gaussian(grid, 0.9, std::vector<double>(2 * n, 0.55),
                                      std::vector<double>(2 * n, 0.0));
    const BoxGrid php = BoxGrid::cube(2 * n, 7, 2.8);
    PhaseField F(php, php);
    FixtureRng rng(cfg.seed + 75);
    for (auto& v : F.values) v = cplx{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const SampledField synth = twisted_stft_adjoint(tw, F, g);
    const PhaseField lhs = twisted_stft(tw, synth, h, php, php, StftMode::fast);
    const int np = php.npts[0];
    const int nd = 2 * np - 1;
    std::vector<std::pair<VecXd, VecXd>> dn;
    auto dc = [&](int k) { return (k - (np - 1)) * php.spacing(0); };
    for (int a = 0; a < nd; ++a)
      for (int b = 0; b < nd; ++b)
        for (int c = 0; c < nd; ++c)
          for (int d = 0; d < nd; ++d) {
            VecXd xi(2), eta(2);
            xi << dc(a), dc(b);
            eta << dc(c), dc(d);
            dn.emplace_back(std::move(xi), std::move(eta));
          }
    const auto vgh = twisted_stft_at(tw, h.samples, g, dn, StftMode::fast);
    const double vol = php.cell_volume() * php.cell_volume();
    auto idx4 = [&](std::size_t flat, int out[4]) {
      out[3] = static_cast<int>(flat % np);
      flat /= np;
      out[2] = static_cast<int>(flat % np);
      flat /= np;
      out[1] = static_cast<int>(flat % np);
      out[0] = static_cast<int>(flat / np);
    };
    double worst = -1e300;
    for (std::size_t i = 0; i < lhs.values.size(); ++i) {
      int io[4];
      idx4(i, io);
      double conv = 0.0;
      for (std::size_t j = 0; j < F.values.size(); ++j) {
        int jo[4];
        idx4(j, jo);
        const std::size_t dflat = ((static_cast<std::size_t>(io[0] - jo[0] + np - 1) * nd +
                                    (io[1] - jo[1] + np - 1)) * nd +
                                   (io[2] - jo[2] + np - 1)) * nd +
                                  (io[3] - jo[3] + np - 1);
        conv += std::abs(F.values[j]) * std::abs(vgh[dflat]);
      }
      worst = std::max(worst, std::abs(lhs.values[i]) - conv * vol * (1.0 + 1e-8));
    }
    rep.add_inequality("tstft.pointwise_bound",
                       "|V_h Vtilde_g F| <= |F| * |V_g h| (STFT pointwise estimate)", 1.0, "",
                       worst, 0.0, 0.0);
  }
}

// ---------------------------------------------------------------------------
// heisenberg
// ---------------------------------------------------------------------------
void heisenberg_suite(const SuiteConfig& cfg, SuiteReport& rep, ConstantsRegistry& reg) {
  const int n = cfg.n;
  const BoxGrid base = cfg.base_grid();
  const BoxGrid tg = cfg.t_grid();
  const double dlam = kPi / tg.halfw[0];

  // central transform closed form and round trip
  {
    const double sig = 1.8;
    HeisenbergField f(base, tg);
    f.fill([&](std::span<const double> x, double t) {
      double r2 = 0.0;
      for (double c : x) r2 += c * c;
      return std::exp(-0.4 * r2) * std::exp(-0.5 * t * t / (sig * sig));
    });
    const LambdaStack st = central_inverse_ft(f);
    double cerr = 0.0;
    std::vector<double> x(base.dim());
    for (std::size_t k = 0; k < st.slices.size(); ++k) {
      const double factor =
          sig * std::sqrt(2.0 * kPi) * std::exp(-0.5 * sig * sig * st.lam_grid[k] * st.lam_grid[k]);
      for (std::size_t b = 0; b < base.size(); b += 7) {
        base.point(b, x);
        double r2 = 0.0;
        for (double c : x) r2 += c * c;
        cerr = std::max(cerr, std::abs(st.slices[k].values[b] - std::exp(-0.4 * r2) * factor));
      }
    }
    rep.add_inequality("central.gaussian_slices", "f^lam of a t-gaussian in closed form", 0.0, "",
                       cerr, 1e-8, 0.0);
    rep.add_inequality("central.round_trip", "recomposition inverts the central transform", 0.0,
                       "", sup_diff_h(central_ft(st), f), 1e-10, 0.0);
  }

  const HeisenbergField f1 = random_heisenberg_field(base, tg, cfg.seed + 80, 2);
  const HeisenbergField f2 = random_heisenberg_field(base, tg, cfg.seed + 81, 2);

  // Pi(zeta, s), modulations, U-tilde, T
  {
    VecXd xi0 = VecXd::Zero(2 * n);
    xi0[0] = 0.6;
    xi0[2 * n - 1] = -0.4;
    const double s0 = 0.5;
    rep.add_relative("big_pi.unitary", "Pi(zeta,s) is an isometry on L^2(H^n)", 0.0, "",
                     h_l2_norm(big_pi_apply(VecXc(xi0.cast<cplx>()), s0, f1)), h_l2_norm(f1),
                     1e-6);
    VecXc zc(2 * n);
    for (int a = 0; a < 2 * n; ++a) zc[a] = cplx{0.3 - 0.1 * a, 0.2 + 0.1 * a};
    rep.add_relative("big_pi.unitary_complex", "Pi(zeta,s) unitary for complex zeta", 0.0, "",
                     h_l2_norm(big_pi_apply(zc, -0.7, f1)), h_l2_norm(f1), 1e-6);

    const HeisenbergField e0 = heisenberg_modulate(VecXd(VecXd::Zero(2 * n)), 0.0, f1);
    rep.add_inequality("modulation.identity", "e(0,0) = id", 0.0, "", sup_diff_h(e0, f1),
                       1e-10 * sup_h(f1), 0.0);
    VecXd eta0 = VecXd::Zero(2 * n);
    eta0[0] = 0.7;
    const HeisenbergField direct = heisenberg_modulate(eta0, 0.4, f1);
    rep.add_relative("modulation.unitary", "e(eta,s) unitary", 0.0, "", h_l2_norm(direct),
                     h_l2_norm(f1), 1e-6);
    const HeisenbergField via_u =
        u_tilde_apply(big_pi_apply(VecXc(eta0.cast<cplx>()), 0.4, u_tilde_apply(f1, true)));
    rep.add_inequality("modulation.u_conjugation", "e(g) = U-tilde tau(g) U-tilde^*", 0.0, "",
                       sup_diff_h(direct, via_u), 1e-5 * sup_h(f1), 0.0);

    rep.add_relative("u_tilde.unitary", "U-tilde unitary on L^2(H^n)", 0.0, "",
                     h_l2_norm(u_tilde_apply(f1)), h_l2_norm(f1), 1e-5);

    LambdaStack ps;
    ps.base_grid = base;
    ps.t_grid = tg;
    const BoxGrid dual = tg.dual();
    for (int k = 0; k < tg.npts[0]; ++k) {
      ps.lam_grid.push_back(dual.coord(0, k));
      ps.slices.push_back(heat_kernel_field(TwistParameter(dual.coord(0, k), n), 0.5, base));
    }
    const HeisenbergField p = central_ft(ps);
    rep.add_inequality("u_tilde.heat_fixed_point", "slices p_{1/2}^lam are U_lambda-fixed", 0.0,
                       "", sup_diff_h(u_tilde_apply(p, false, 1e-4), p), 2e-5 * sup_h(p), 0.0);

    const HeisenbergField tf = t_multiplier_apply(f1);
    const LambdaStack sf = central_inverse_ft(f1);
    const LambdaStack stf = central_inverse_ft(tf);
    double terr = 0.0;
    for (std::size_t k = 0; k < sf.slices.size(); ++k) {
      const double rc = std::sqrt(TwistParameter(sf.lam_grid[k], n).c_lam);
      for (std::size_t b = 0; b < sf.slices[k].values.size(); b += 11)
        terr = std::max(terr, std::abs(stf.slices[k].values[b] - rc * sf.slices[k].values[b]));
    }
    rep.add_inequality("t_multiplier.slices", "T multiplies slices by sqrt(c_lambda)", 0.0, "",
                       terr, 1e-10 * sup_h(f1), 0.0);
    const HeisenbergField comm_a =
        t_multiplier_apply(big_pi_apply(VecXc(xi0.cast<cplx>()), 0.0, f1));
    const HeisenbergField comm_b =
        big_pi_apply(VecXc(xi0.cast<cplx>()), 0.0, t_multiplier_apply(f1));
    rep.add_inequality("t_multiplier.commutes", "T commutes with tau(xi, 0)", 0.0, "",
                       sup_diff_h(comm_a, comm_b), 1e-8 * sup_h(f1), 0.0);
    const cplx sa = h_inner(t_multiplier_apply(f1), f2);
    const cplx sb = h_inner(f1, t_multiplier_apply(f2));
    rep.add_inequality("t_multiplier.self_adjoint", "T self-adjoint (real symbol)", 0.0, "",
                       std::abs(sa - sb), 1e-8 * std::abs(sa), 0.0);
  }

  // V / Vtilde and the Plancherel chain
  {
    std::vector<double> ratios;
    for (std::uint64_t s : {0u, 1u, 2u, 3u, 4u}) {
      const HeisenbergField f = random_heisenberg_field(base, tg, cfg.seed + 90 + s, 2);
      const std::vector<double> sq = v_slice_l2_sq(f);
      double acc = 0.0;
      for (double v : sq) acc += v;
      const double nf = h_l2_norm(f);
      ratios.push_back(acc * dlam / (nf * nf));
    }
    double perr = 0.0;
    for (double r : ratios) perr = std::max(perr, std::abs(r - ratios.front()));
    rep.add_inequality("v.plancherel",
                       "Int ||V_lam f||^2 dlam = c ||f||^2 (matrix-planch), c constant", 0.0,
                       "5 fixtures", perr, 1e-3 * ratios.front(), 0.0);
    reg.set("heis_planch", ratios.front(), 1e-3, "suite");

    const VShearedStack V = v_transform_sheared(f1, StftMode::fast, 1e-7);
    const HeisenbergField back = v_adjoint_sheared(V, base, tg);
    const double nf = h_l2_norm(f1);
    const double c = (h_inner(back, f1) / (nf * nf)).real();
    double m = 0.0;
    for (std::size_t i = 0; i < f1.values.size(); ++i)
      m = std::max(m, std::abs(back.values[i] - c * f1.values[i]));
    rep.add_inequality("v.inversion", "Vtilde(V f) = c f (v-vtilde)", 0.0, "", m,
                       1e-3 * c * sup_h(f1), 0.0);
    const double c2 = reg.get("vvtilde");
    rep.add_relative("v.inversion_constant", "inversion constant matches the registry", 0.0, "",
                     c, c2, 1e-3);
  }

  // fundamental identity on a symmetric sublattice of the desk phase box
  {
    const BoxGrid ph = BoxGrid::cube(2 * n, cfg.phase_npts / 2, cfg.phase_halfw);
    const VStack vf = v_transform(f1, ph, ph, StftMode::fast, 1e-6);
    const VStack vu = v_transform(u_tilde_apply(f1), ph, ph, StftMode::fast, 1e-6);
    double supv = 0.0;
    for (const auto& s : vf.slices)
      for (const cplx& v : s) supv = std::max(supv, std::abs(v));
    auto negf = [&](std::size_t flat) {
      std::vector<int> idx(2 * n);
      ph.unflat(flat, idx);
      for (int a = 0; a < 2 * n; ++a) idx[a] = (ph.npts[a] - idx[a]) % ph.npts[a];
      return ph.flat(idx);
    };
    const std::size_t neta = ph.size();
    double m = 0.0;
    std::vector<int> idx(2 * n);
    for (std::size_t k = 0; k < vf.slices.size(); ++k) {
      if (vf.slices[k].empty() || vu.slices[k].empty()) continue;
      for (std::size_t i = 0; i < neta; ++i) {
        ph.unflat(i, idx);
        bool wrap = false;
        for (int a = 0; a < 2 * n; ++a) wrap |= idx[a] == 0;
        if (wrap) continue;
        for (std::size_t j = 0; j < neta; ++j) {
          ph.unflat(j, idx);
          bool wrap2 = false;
          for (int a = 0; a < 2 * n; ++a) wrap2 |= idx[a] == 0;
          if (wrap2) continue;
          m = std::max(m, std::abs(vu.slices[k][i * neta + j] - vf.slices[k][j * neta + negf(i)]));
        }
      }
    }
    rep.add_inequality("v.fundamental_identity", "V(U-tilde f)(zeta,s) = V f(-i zeta, s)", 0.0,
                       "symmetric sublattice", m, 1e-4 * supv, 0.0);
  }

  // K_lambda: mass and mixed-norm shape
  for (double lam : {0.5, 1.0, 2.0}) {
    const TwistParameter tw(lam, n);
    rep.add_relative("k_lambda.peak", "K_lambda(0,0) = c_lambda^2", lam, "",
                     k_lambda_kernel(tw, VecXd(VecXd::Zero(2 * n)), VecXd(VecXd::Zero(2 * n))),
                     tw.c_lam * tw.c_lam, 1e-14);
    rep.add_relative("k_lambda.mass", "Int K_lambda = 1 (required property of K)", lam, "",
                     k_lambda_mass_quadrature(tw), 1.0, 1e-6);
  }
  {
    std::vector<double> ratio;
    for (double lam : {0.5, 1.0, 2.0, 4.0})
      ratio.push_back(k_lambda_mixed_norm_quadrature(TwistParameter(lam, n), 1.0, 2.0) /
                      k_lambda_mixed_norm_shape(TwistParameter(lam, n), 1.0, 2.0));
    double kerr = 0.0;
    for (double r : ratio) kerr = std::max(kerr, std::abs(r - ratio.front()));
    rep.add_inequality("k_lambda.mixed_norm_shape",
                       "||K_lambda||_{r,s} follows (lam/sinh)^{2n(1-1/s)} (inclusion proof)", 0.0,
                       "r=1,s=2 over lambda", kerr, 1e-4 * ratio.front(), 0.0);
  }

  // Heisenberg modulation-space norms
  {
    const BoxGrid ph = BoxGrid::cube(2 * n, cfg.phase_npts / 2, cfg.phase_halfw);
    rep.add_relative("m_pq.fubini", "M^{2,2} norm equals the m1 variant (Fubini)", 0.0, "p=q=2",
                     m_pq_heisenberg_norm(f1, {2, 2}, ph, ph), m1_norm(f1, {2, 2}, ph, ph), 1e-6);

    auto m22 = [&](const HeisenbergField& h) {
      const std::vector<double> sq = v_slice_l2_sq(h);
      double acc = 0.0;
      for (double v : sq) acc += v;
      return std::sqrt(acc * dlam);
    };
    VecXd xi0 = VecXd::Zero(2 * n);
    xi0[0] = 0.8;
    rep.add_relative("m_pq.translation_invariance", "M norms invariant under Pi(xi, s)", 0.0,
                     "p=q=2", m22(big_pi_apply(VecXc(xi0.cast<cplx>()), 0.6, f1)), m22(f1), 1e-4);
    rep.add_relative("m_pq.modulation_invariance", "M norms invariant under e(eta, s)", 0.0,
                     "p=q=2", m22(heisenberg_modulate(xi0, -0.3, f1)), m22(f1), 1e-4);
    // The 1e-3 invariance tolerances at the fixed desk box need fixtures whose
    // phase-space support clears the box boundary: narrow spatial widths and a
    // lambda-concentrated central profile.
    FixtureRng nrng(cfg.seed + 95);
    const GaussianMixture nmix = random_mixture(nrng, 2 * n, 2, 0.5, 0.7, 0.8, 0.5);
    HeisenbergField fn(base, tg);
    fn.fill([&](std::span<const double> x, double t) {
      return nmix.eval(x) * std::exp(-t * t / (2.0 * 2.0 * 2.0)) *
             cplx{std::cos(0.4 * t), std::sin(0.4 * t)};
    });
    const MixedNormSpec spec{1.0, 2.0};
    VecXd sm = VecXd::Zero(2 * n);
    sm[0] = 0.3;
    rep.add_relative("m_pq.mixed_invariance", "mixed norms invariant on the shared lattice", 0.0,
                     "p=1,q=2",
                     m_pq_heisenberg_norm(big_pi_apply(VecXc(sm.cast<cplx>()), 0.4, fn), spec, ph, ph),
                     m_pq_heisenberg_norm(fn, spec, ph, ph), 1e-3);
    // p = q invariance under U-tilde: the value rotation (xi,eta) -> (eta,-xi)
    // maps the centered lattice onto itself except the k = 0 wrap rows, so the
    // comparison trims those rows from both norms (a negation-closed sublattice).
    const MixedNormSpec pp{1.5, 1.5};
    auto trimmed_norm = [&](const HeisenbergField& hf) {
      VStack V = v_transform(hf, ph, ph, StftMode::fast, 1e-8);
      std::vector<int> idx(2 * n);
      double acc = 0.0;
      const std::size_t neta = ph.size();
      for (auto& slice : V.slices) {
        if (slice.empty()) continue;
        for (std::size_t i = 0; i < neta; ++i) {
          ph.unflat(i, idx);
          bool wrap = false;
          for (int a = 0; a < 2 * n; ++a) wrap |= idx[a] == 0;
          for (std::size_t j = 0; j < neta && !wrap; ++j) continue;
          for (std::size_t j = 0; j < neta; ++j) {
            ph.unflat(j, idx);
            bool wrap2 = wrap;
            for (int a = 0; a < 2 * n; ++a) wrap2 |= idx[a] == 0;
            if (wrap2) slice[i * neta + j] = cplx{0.0, 0.0};
          }
        }
        PhaseField F(ph, ph);
        F.values = slice;
        const double nk = mixed_norm_lpq(F, pp);
        acc += nk * nk * V.dlam;
      }
      return std::sqrt(acc);
    };
    rep.add_relative("m_pq.u_invariance", "M^{p,p}(H^n) invariant under U-tilde", 0.0,
                     "p=q=1.5, wrap-trimmed", trimmed_norm(u_tilde_apply(fn)), trimmed_norm(fn),
                     1e-3);

    const LambdaStack st = central_inverse_ft(f1);
    double cbound = 0.0;
    for (double lam : st.lam_grid)
      cbound = std::max(cbound, k_lambda_mixed_norm_quadrature(TwistParameter(lam, n), 2.0, 2.0) /
                                    reg.get("d_n_orth"));
    rep.add_inequality("m_pq.inclusion", "||f||_{(2,2)} <= C ||f||_{(1,1)} via the K bound", 0.0,
                       "", m_pq_heisenberg_norm(f1, {2, 2}, ph, ph),
                       cbound * m_pq_heisenberg_norm(f1, {1, 1}, ph, ph), 1e-3);
  }

  // B_H and the duality bracket
  {
    VecXc zeta(2 * n);
    for (int a = 0; a < 2 * n; ++a) zeta[a] = cplx{0.5 - 0.2 * a, -0.3 + 0.2 * a};
    const double s0 = 0.7;
    const cplx route_a = bargmann_heisenberg(f1, zeta, {cplx{s0, 0.0}})[0];
    const HeisenbergField h = heat_kernel_sublaplacian(base, tg, 0.5, true);
    const cplx route_b =
        std::exp(0.25 * s0 * s0) * h_inner(t_multiplier_apply(f1), big_pi_apply(zeta, s0, h));
    rep.add_inequality("b_h.two_routes",
                       "B_H = e^{s^2/4} <T f, Pi(zeta,s) h_{1/2}> (heisen-barg)", 0.0, "",
                       std::abs(route_a - route_b), 1e-4 * std::abs(route_a), 0.0);

    const LambdaStack st = central_inverse_ft(f1);
    std::vector<double> cs;
    for (const auto& zpt : {zeta, VecXc(0.5 * zeta)}) {
      std::vector<cplx> spts;
      const int ns = 26;
      const double sh = 7.0;
      const double ds = 2.0 * sh / ns;
      for (int a = 0; a < ns; ++a)
        for (int b = 0; b < ns; ++b)
          spts.push_back(cplx{-sh + (a + 0.5) * ds, -sh + (b + 0.5) * ds});
      const auto bh = bargmann_heisenberg(f1, zpt, spts);
      double lhs = 0.0;
      for (std::size_t i = 0; i < spts.size(); ++i)
        lhs += std::norm(bh[i]) * std::exp(-0.5 * std::norm(spts[i]));
      lhs *= ds * ds;
      double rhs = 0.0;
      for (std::size_t k = 0; k < st.lam_grid.size(); ++k) {
        const TwistParameter tw(st.lam_grid[k], n);
        rhs += std::norm(weighted_bargmann_at(tw, st.slices[k], {zpt})[0]) * st.dlam();
      }
      cs.push_back(lhs / rhs);
    }
    rep.add_relative("b_h.bargmann_identity",
                     "Int |B_H|^2 e^{-|s|^2/2} = c Int |V_lam|^2 dlam (barg-identity)", 0.0,
                     "c constant over zeta", cs[0], cs[1], 1e-3);

    const BoxGrid ph = BoxGrid::cube(2 * n, cfg.phase_npts / 2, cfg.phase_halfw);
    const cplx br = dual_bracket(f1, f2, ph, ph);
    const double hl = m_pq_heisenberg_norm(f1, {1.5, 2.0}, ph, ph) *
                      m_pq_heisenberg_norm(f2, {3.0, 2.0}, ph, ph);
    rep.add_inequality("dual.hoelder", "|<f,g>_0| <= ||f||_{(p,q)} ||g||_{(p',q')}", 0.0,
                       "p=1.5,q=2", std::abs(br), hl, 1e-9);
  }
}

}  // namespace ttfa
