#include <doctest.h>

#include <cmath>

#include "testutil.hpp"
#include "ttfa/fixtures.hpp"
#include "ttfa/fock.hpp"
#include "ttfa/twisted_ops.hpp"

using namespace ttfa;

namespace {
// Unit-width fixtures keep both box-edge and Nyquist leakage far below the
// tolerances here (narrower widths push spectral tails toward the band edge).
SampledField narrow_field(const BoxGrid& g, std::uint64_t seed, int k = 2) {
  FixtureRng rng(seed);
  return sample_mixture(random_mixture(rng, g.dim(), k, 1.2, 1.0, 1.3, 0.8), g);
}
const BoxGrid kGrid = BoxGrid::cube(2, 48, 9.0);
}  // namespace

TEST_CASE("twist parameter: derived constants and series branches") {
  const TwistParameter t0(0.0, 1);
  CHECK(t0.c_lam == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-14));
  CHECK(t0.c_half == 1.0);
  CHECK(t0.lam_coth_lam == 1.0);

  const TwistParameter t2(2.0, 3);
  CHECK(t2.c_lam == doctest::Approx(std::pow(2.0 / (4.0 * kPi * std::sinh(2.0)), 3)).epsilon(1e-14));
  CHECK(t2.c_half == doctest::Approx(std::cosh(1.0) / std::sinh(1.0)).epsilon(1e-14));

  // Branch agreement at the 1e-4 threshold.
  CHECK(std::abs(x_coth_x(0.99e-4) - 0.99e-4 / std::tanh(0.99e-4)) < 1e-12);
  CHECK(std::abs(x_over_sinh_x(0.99e-4) - 0.99e-4 / std::sinh(0.99e-4)) < 1e-12);
  for (double lam : {-10.0, -3.3, -0.5, 1e-6, 0.7, 4.0, 10.0})
    CHECK(TwistParameter(lam, 1).c_half >= 1.0);
}

TEST_CASE("heat kernel: closed-form values, limits, complex arguments") {
  const TwistParameter tw(1.0, 1);
  CHECK(heat_kernel_special_hermite(tw, 0.5, VecXd(VecXd::Zero(2))) ==
        doctest::Approx(1.0 / (4.0 * kPi * std::sinh(0.5))).epsilon(1e-6));
  CHECK(heat_kernel_special_hermite(tw, 0.5, VecXd(VecXd::Zero(2))) ==
        doctest::Approx(0.1527125).epsilon(1e-5));

  const TwistParameter tw0(1e-7, 1);
  VecXd z(2);
  z << 0.8, -0.3;
  CHECK(heat_kernel_special_hermite(tw0, 1.0, z) ==
        doctest::Approx(std::exp(-z.squaredNorm() / 4.0) / (4.0 * kPi)).epsilon(1e-8));

  VecXc zi(2);
  zi << cplx{0.0, 1.0}, cplx{0.0, 0.0};
  const double p0 = heat_kernel_special_hermite(tw, 1.0, VecXd(VecXd::Zero(2)));
  CHECK(std::abs(heat_kernel_special_hermite(tw, 1.0, zi)) ==
        doctest::Approx(p0 * std::exp(0.25 / std::tanh(1.0))).epsilon(1e-10));

  VecXc zc = zi;
  CHECK_THROWS_AS(heat_kernel_special_hermite(tw, -1.0, zc), ttfa_error);
  CHECK_THROWS_AS(heat_kernel_special_hermite(tw, 0.0, zc), ttfa_error);
}

TEST_CASE("twisted translation: identity, inverse, projective composition") {
  const TwistParameter tw(1.0, 1);
  const SampledField f = narrow_field(kGrid, 42);

  VecXd zero = VecXd::Zero(2);
  const SampledField id = twisted_translate(tw, zero, f);
  for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(id.values[i] == f.values[i]);

  VecXd eta(2);
  eta << 0.9, -1.3;
  const SampledField back = twisted_translate(tw, VecXd(-eta), twisted_translate(tw, eta, f));
  CHECK(testutil::sup_diff(back, f) < 1e-8);

  // tau(a) tau(b) = e^{i (lam/2)[a,b]} tau(a+b)
  VecXd a(2), b(2);
  a << 0.6, 0.8;
  b << -1.1, 0.4;
  const SampledField lhs = twisted_translate(tw, a, twisted_translate(tw, b, f));
  SampledField rhs = twisted_translate(tw, VecXd(a + b), f);
  const double ph = 0.5 * tw.lam * symplectic_form(a, b);
  for (auto& v : rhs.values) v *= cplx{std::cos(ph), std::sin(ph)};
  CHECK(testutil::sup_diff(lhs, rhs) < 1e-8);

  CHECK(l2_norm(twisted_translate(tw, eta, f)) == doctest::Approx(l2_norm(f)).epsilon(1e-7));
}

TEST_CASE("twisted modulation: identity, lambda->0 limit, U-intertwining") {
  const SampledField f = narrow_field(kGrid, 43);
  VecXd ab(2);
  ab << 1.1, -0.7;

  const TwistParameter tw0(1e-12, 1);
  SampledField mod = f;
  {
    std::vector<double> x(2);
    for (std::size_t i = 0; i < mod.values.size(); ++i) {
      kGrid.point(i, x);
      const double ph = -(x[0] * ab[0] + x[1] * ab[1]);
      mod.values[i] *= cplx{std::cos(ph), std::sin(ph)};
    }
  }
  CHECK(testutil::sup_diff(twisted_modulate(tw0, ab, f), mod) < 1e-10);

  // The U-route is band-limited: use the spectrally tight fixture family,
  // matching the coverage precondition of u_lambda_apply.
  const SampledField ftight = random_tight_field(kGrid, 430, 2);
  for (double lam : {0.5, 1.0}) {
    const TwistParameter tw(lam, 1);
    const SampledField direct = twisted_modulate(tw, ab, ftight);
    const SampledField via_u =
        u_lambda_apply(tw, twisted_translate(tw, ab, u_lambda_apply(tw, ftight, true)));
    CHECK(testutil::sup_diff(direct, via_u) < 1e-7);
    CHECK(l2_norm(direct) == doctest::Approx(l2_norm(ftight)).epsilon(1e-7));
  }

  const TwistParameter tw(1.0, 1);
  VecXd zero = VecXd::Zero(2);
  const SampledField id = twisted_modulate(tw, zero, f);
  for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(id.values[i] == f.values[i]);
}

TEST_CASE("Pi_lambda: composition law and the classical matrix-coefficient bridge") {
  // Two stacked shift-chirp operators need extra edge/Nyquist headroom.
  const BoxGrid big = BoxGrid::cube(2, 56, 10.0);
  const TwistParameter tw(1.0, 1);
  FixtureRng frng(440);
  const SampledField f = sample_mixture(random_mixture(frng, 2, 2, 0.8, 1.05, 1.25, 0.6), big);
  const SampledField g = sample_mixture(random_mixture(frng, 2, 1, 0.8, 1.05, 1.25, 0.6), big);
  FixtureRng rng(46);

  VecXd xi0 = VecXd::Zero(2), eta0 = VecXd::Zero(2);
  const SampledField id = rep_pi_lambda(tw, xi0, eta0, f);
  CHECK(testutil::sup_diff(id, f) == 0.0);

  for (int trial = 0; trial < 3; ++trial) {
    VecXc z1(2), z2(2);
    for (int a = 0; a < 2; ++a) {
      z1[a] = cplx{rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7)};
      z2[a] = cplx{rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7)};
    }
    const SampledField lhs =
        rep_pi_lambda_central(tw, z1, 0.0, rep_pi_lambda_central(tw, z2, 0.0, f));
    SampledField rhs = rep_pi_lambda_central(tw, VecXc(z1 + z2), 0.0, f);
    const cplx dot = (z1.array() * z2.array().conjugate()).sum();
    const cplx sym = symplectic_form_c(z1, z2.conjugate());
    const double ph = -0.5 * (tw.lam_coth_lam * dot.imag() - tw.lam * sym.real());
    for (auto& v : rhs.values) v *= cplx{std::cos(ph), std::sin(ph)};
    CHECK(testutil::sup_diff(lhs, rhs) < 1e-7);
  }

  for (int trial = 0; trial < 5; ++trial) {
    VecXd xi(2), eta(2);
    xi << rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5);
    eta << rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5);
    VecXd xp, ep;
    lambda_matrix_apply(tw, xi, eta, xp, ep);
    const cplx lhs = inner_product(f, rep_pi_lambda(tw, xi, eta, g));
    const cplx rhs = inner_product(f, schrodinger_rep_2n(ep, VecXd(-xp), g));
    CHECK(std::abs(lhs - rhs) < 1e-7 * l2_norm(f) * l2_norm(g));
  }

  // Unitarity band for all four operator families.
  const double nf = l2_norm(f);
  VecXd xi(2), eta(2);
  xi << 1.2, -0.5;
  eta << 0.4, 0.9;
  for (const SampledField& tf :
       {twisted_translate(tw, xi, f), twisted_modulate(tw, eta, f), rep_pi_lambda(tw, xi, eta, f),
        schrodinger_rep_2n(xi, eta, f)}) {
    CHECK(l2_norm(tf) / nf > 1.0 - 1e-7);
    CHECK(l2_norm(tf) / nf < 1.0 + 1e-7);
  }
}

TEST_CASE("schrodinger rep on R^{2n}: unitarity and cocycle") {
  const BoxGrid big = BoxGrid::cube(2, 56, 10.0);
  FixtureRng frng(470);
  const SampledField f = sample_mixture(random_mixture(frng, 2, 2, 0.6, 1.0, 1.1, 0.6), big);
  VecXd x(2), y(2), u(2), v(2);
  x << 0.6, -0.2;
  y << -0.5, 0.7;
  u << 0.3, 0.5;
  v << -0.6, -0.4;
  CHECK(l2_norm(schrodinger_rep_2n(x, y, f)) == doctest::Approx(l2_norm(f)).epsilon(1e-10));

  const SampledField lhs = schrodinger_rep_2n(x, y, schrodinger_rep_2n(u, v, f));
  SampledField rhs = schrodinger_rep_2n(VecXd(x + u), VecXd(y + v), f);
  // pi(x,y) pi(u,v) = e^{i(u.y - x.v)/2} pi(x+u, y+v).
  const double coc = 0.5 * (u.dot(y) - x.dot(v));
  for (auto& w : rhs.values) w *= cplx{std::cos(coc), std::sin(coc)};
  CHECK(testutil::sup_diff(lhs, rhs) < 1e-9);
}

TEST_CASE("twisted convolution: vanishing twist reduces to ordinary convolution") {
  const BoxGrid small = BoxGrid::cube(2, 24, 7.0);
  const SampledField f = narrow_field(small, 48, 1);
  const SampledField g = narrow_field(small, 49, 1);
  const TwistParameter tw0(1e-10, 1);
  const SampledField tc = twisted_convolve(tw0, f, g, ConvMode::direct);

  // Brute-force ordinary convolution oracle (zero-extended).
  SampledField oracle(small);
  const int n0 = small.npts[0], n1 = small.npts[1];
  for (int i0 = 0; i0 < n0; ++i0)
    for (int i1 = 0; i1 < n1; ++i1) {
      cplx acc{0, 0};
      for (int j0 = 0; j0 < n0; ++j0)
        for (int j1 = 0; j1 < n1; ++j1) {
          const int k0 = i0 - j0 + n0 / 2, k1 = i1 - j1 + n1 / 2;
          if (k0 < 0 || k0 >= n0 || k1 < 0 || k1 >= n1) continue;
          acc += f.values[static_cast<std::size_t>(k0) * n1 + k1] *
                 g.values[static_cast<std::size_t>(j0) * n1 + j1];
        }
      oracle.values[static_cast<std::size_t>(i0) * n1 + i1] = acc * small.cell_volume();
    }
  CHECK(testutil::sup_diff(tc, oracle) < 1e-8 * testutil::sup_abs(oracle));
}

TEST_CASE("twisted convolution: semigroup, covariance, fast path, Young") {
  const TwistParameter tw(1.0, 1);
  const BoxGrid grid = BoxGrid::cube(2, 32, 9.0);
  const SampledField f = narrow_field(grid, 50, 1);
  const SampledField g = narrow_field(grid, 51, 1);

  const SampledField ph = heat_kernel_field(tw, 0.5, grid);
  const SampledField p1 = heat_kernel_field(tw, 1.0, grid);
  const SampledField conv = twisted_convolve(tw, ph, ph, ConvMode::fast);
  CHECK(testutil::sup_diff(conv, p1) < 1e-7 * testutil::sup_abs(p1));

  VecXd ab(2);
  ab << 0.8, -0.5;
  const SampledField lhs = twisted_translate(tw, ab, twisted_convolve(tw, f, g, ConvMode::direct));
  const SampledField rhs = twisted_convolve(tw, twisted_translate(tw, ab, f), g, ConvMode::direct);
  CHECK(testutil::sup_diff(lhs, rhs) < 1e-7 * testutil::sup_abs(lhs));

  const SampledField fast = twisted_convolve(tw, f, g, ConvMode::fast);
  const SampledField direct = twisted_convolve(tw, f, g, ConvMode::direct);
  CHECK(testutil::sup_diff(fast, direct) < 1e-8 * std::max(1.0, testutil::sup_abs(direct)));

  // Sharp Young constant for the t-con normalization: (2 pi/|lam|)^{n(1-1/p)}.
  for (double p : {1.0, 1.5, 2.0}) {
    const double young_c = std::pow(2.0 * kPi / std::abs(tw.lam), 1.0 - 1.0 / p);
    CHECK(lp_norm(fast, p) <= young_c * lp_norm(f, p) * lp_norm(g, p) * (1.0 + 1e-9));
  }

  SampledField wrong(BoxGrid::cube(2, 16, 9.0));
  CHECK_THROWS_WITH_AS(twisted_convolve(tw, f, wrong, ConvMode::fast),
                       doctest::Contains("grid mismatch"), ttfa_error);
}

TEST_CASE("group laws: G_n, twisted Heisenberg, Heisenberg") {
  FixtureRng rng(52);
  auto rand_zeta = [&](int d) {
    VecXc z(d);
    for (int a = 0; a < d; ++a) z[a] = cplx{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    return z;
  };

  // central subgroup: (0,s)(0,s') = (0, s+s')
  GroupElementGn c1{VecXc::Zero(2), cplx{0.3, -0.1}}, c2{VecXc::Zero(2), cplx{-1.2, 0.4}};
  const GroupElementGn cs = group_mul_gn(c1, c2);
  CHECK(std::abs(cs.s - (c1.s + c2.s)) == 0.0);
  CHECK(cs.zeta.cwiseAbs().maxCoeff() == 0.0);

  const GroupElementGn g1{rand_zeta(2), cplx{0.2, 0.7}};
  const GroupElementGn g2{rand_zeta(2), cplx{-0.4, 0.1}};
  const GroupElementGn g3{rand_zeta(2), cplx{0.9, -0.3}};
  const GroupElementGn a = group_mul_gn(group_mul_gn(g1, g2), g3);
  const GroupElementGn b = group_mul_gn(g1, group_mul_gn(g2, g3));
  CHECK(std::abs(a.s - b.s) < 1e-12);
  CHECK((a.zeta - b.zeta).cwiseAbs().maxCoeff() < 1e-12);

  const TwistParameter tw(0.7, 1);
  GroupElementTwistedH t1{rand_zeta(2), 0.5, tw}, t2{rand_zeta(2), -0.2, tw};
  const GroupElementTwistedH tid =
      group_mul_twisted(GroupElementTwistedH{VecXc::Zero(2), 0.0, tw}, t1);
  CHECK(tid.t == t1.t);
  CHECK((tid.zeta - t1.zeta).cwiseAbs().maxCoeff() == 0.0);
  CHECK(group_mul_twisted(t1, t2).t ==
        doctest::Approx(twisted_central_mackey(t1, t2)).epsilon(1e-12));

  const TwistParameter tw_mismatch(0.9, 1);
  GroupElementTwistedH t3{rand_zeta(2), 0.0, tw_mismatch};
  CHECK_THROWS_WITH_AS(group_mul_twisted(t1, t3), doctest::Contains("lambda mismatch"), ttfa_error);
}

TEST_CASE("Theta_lambda: skew, invertible, not orthogonal; degenerate at 0") {
  const TwistParameter tw(1.0, 1);
  const Eigen::MatrixXd theta = build_theta_lambda(tw);
  CHECK((theta.transpose() + theta).cwiseAbs().maxCoeff() == 0.0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(theta);
  CHECK(svd.singularValues().minCoeff() > 0.0);
  CHECK(svd.singularValues().maxCoeff() / svd.singularValues().minCoeff() > 1.0 + 1e-6);
  CHECK_THROWS_WITH_AS(build_theta_lambda(TwistParameter(0.0, 1)),
                       doctest::Contains("degenerate twist"), ttfa_error);
}

TEST_CASE("Lambda matrix: determinant closed form and limits") {
  for (double lam : {0.1, 0.5, 1.0, 2.0, 4.0}) {
    const TwistParameter tw(lam, 1);
    const double det = build_lambda_matrix(tw).determinant();
    CHECK(det == doctest::Approx(lambda_matrix_det_closed_form(tw)).epsilon(1e-9));
  }
  const TwistParameter one(1.0, 1);
  CHECK(lambda_matrix_det_closed_form(one) ==
        doctest::Approx(1.0 / (std::sinh(1.0) * std::sinh(1.0))).epsilon(1e-12));
  CHECK(lambda_matrix_det_closed_form(one) == doctest::Approx(0.7240617).epsilon(1e-6));

  const Eigen::MatrixXd tiny = build_lambda_matrix(TwistParameter(1e-8, 1));
  Eigen::MatrixXd limit = Eigen::MatrixXd::Zero(4, 4);
  limit.topLeftCorner(2, 2).setIdentity();
  limit.bottomRightCorner(2, 2) = -Eigen::MatrixXd::Identity(2, 2);
  CHECK((tiny - limit).cwiseAbs().maxCoeff() < 1e-7);

  const TwistParameter tw(1.7, 1);
  VecXd xi(2), eta(2), xp, ep;
  xi << 0.3, -1.4;
  eta << 0.8, 0.2;
  lambda_matrix_apply(tw, xi, eta, xp, ep);
  VecXd full(4);
  full << xp, ep;
  const VecXd back = build_lambda_matrix(tw).inverse() * full;
  CHECK((back.head(2) - xi).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((back.tail(2) - eta).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("classical STFT: peak, Plancherel, direct-quadrature agreement") {
  const BoxGrid grid = BoxGrid::cube(2, 32, 9.0);
  const SampledField f = narrow_field(grid, 54);
  const SampledField g = narrow_field(grid, 55, 1);
  const PhaseField V = classical_stft(f, g);

  std::vector<int> mid = {16, 16};
  const std::size_t x0 = grid.flat(mid);
  const PhaseField Vgg = classical_stft(g, g);
  const double ng = l2_norm(g);
  CHECK(Vgg.at(x0, x0).real() == doctest::Approx(ng * ng).epsilon(1e-9));

  std::vector<double> terms(V.values.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = std::norm(V.values[i]);
  const double mass =
      pairwise_sum<double>(terms) * V.xi_grid.cell_volume() * V.eta_grid.cell_volume();
  const double nf = l2_norm(f);
  CHECK(mass == doctest::Approx(std::pow(2.0 * kPi, 2) * nf * nf * ng * ng).epsilon(1e-6));

  // FFT values vs the direct quadrature oracle at a handful of nodes.
  for (int t = 0; t < 4; ++t) {
    std::vector<int> xi_idx = {10 + 3 * t, 20 - 2 * t};
    std::vector<int> yi_idx = {14 + t, 17 - t};
    VecXd x(2), y(2);
    for (int a = 0; a < 2; ++a) {
      x[a] = grid.coord(a, xi_idx[a]);
      y[a] = V.eta_grid.coord(a, yi_idx[a]);
    }
    const cplx oracle = classical_stft_at(f, g, x, y);
    CHECK(std::abs(V.at(grid.flat(xi_idx), V.eta_grid.flat(yi_idx)) - oracle) <
          1e-9 * std::max(1.0, std::abs(oracle)));
  }
}
