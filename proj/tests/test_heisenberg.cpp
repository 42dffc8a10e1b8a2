#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "testutil.hpp"
#include "ttfa/fixtures.hpp"
#include "ttfa/heisenberg.hpp"

using namespace ttfa;

namespace {
const BoxGrid kBase = BoxGrid::cube(2, 40, 9.0);
const BoxGrid kT = BoxGrid::cube(1, 32, 12.0);

// Mixture in xi times a Gaussian tone in t, with everything evaluable in
// closed form for translation oracles.
struct AnalyticFixture {
  GaussianMixture mix;
  double sigma_t;
  double wt;
  cplx eval(std::span<const double> x, double t) const {
    return mix.eval(x) * std::exp(-t * t / (2.0 * sigma_t * sigma_t)) *
           cplx{std::cos(wt * t), std::sin(wt * t)};
  }
  HeisenbergField sample() const {
    HeisenbergField f(kBase, kT);
    f.fill([&](std::span<const double> x, double t) { return eval(x, t); });
    return f;
  }
};

AnalyticFixture make_fixture(std::uint64_t seed) {
  FixtureRng rng(seed);
  AnalyticFixture fx{random_mixture(rng, 2, 2, 0.8, 0.85, 1.0, 0.6), 1.5, rng.uniform(-0.6, 0.6)};
  return fx;
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
}  // namespace

TEST_CASE("central transform: closed form, constant slices, round trip") {
  // f(xi,t) = g(xi) e^{-t^2/(2 s^2)}: f^lam = g(xi) s sqrt(2 pi) e^{-s^2 lam^2/2}.
  // s = 1.8 keeps both the t-box tail and the lambda band-edge tail below 1e-9.
  const double sig = 1.8;
  HeisenbergField f(kBase, kT);
  f.fill([&](std::span<const double> x, double t) {
    return std::exp(-0.4 * (x[0] * x[0] + x[1] * x[1])) * std::exp(-0.5 * t * t / (sig * sig));
  });
  const LambdaStack st = central_inverse_ft(f);
  CHECK(st.lam_grid.size() == 32);
  CHECK(st.dlam() == doctest::Approx(kPi / 12.0).epsilon(1e-14));
  double m = 0.0;
  for (std::size_t k = 0; k < st.slices.size(); ++k) {
    const double lam = st.lam_grid[k];
    const double factor = sig * std::sqrt(2.0 * kPi) * std::exp(-0.5 * sig * sig * lam * lam);
    std::vector<double> x(2);
    for (std::size_t b = 0; b < kBase.size(); ++b) {
      kBase.point(b, x);
      const double expected = std::exp(-0.4 * (x[0] * x[0] + x[1] * x[1])) * factor;
      m = std::max(m, std::abs(st.slices[k].values[b] - expected));
    }
  }
  CHECK(m < 1e-8);

  // xi-independent field: slices constant in xi.
  HeisenbergField h(kBase, kT);
  h.fill([](std::span<const double>, double t) { return std::exp(-0.3 * t * t) * cplx{0.2, 0.7}; });
  const LambdaStack sth = central_inverse_ft(h);
  for (const auto& slice : sth.slices) {
    for (const cplx& v : slice.values) CHECK(std::abs(v - slice.values[0]) < 1e-12);
  }

  const HeisenbergField back = central_ft(st);
  CHECK(sup_diff_h(back, f) < 1e-10);
}

TEST_CASE("Pi(zeta, s): identity, left translation for real zeta, unitarity") {
  const AnalyticFixture fx = make_fixture(301);
  const HeisenbergField f = fx.sample();

  const HeisenbergField id = big_pi_apply(VecXc(VecXc::Zero(2)), 0.0, f);
  CHECK(sup_diff_h(id, f) < 1e-10 * sup_h(f));

  // real zeta: Pi(xi0, s0) f(eta, t) = f(eta - xi0, t - s0 - [xi0, eta]/2)
  VecXd xi0(2);
  xi0 << 0.6, -0.4;
  const double s0 = 0.5;
  const HeisenbergField lhs = big_pi_apply(VecXc(xi0.cast<cplx>()), s0, f);
  HeisenbergField oracle(kBase, kT);
  oracle.fill([&](std::span<const double> x, double t) {
    VecXd eta(2);
    eta << x[0], x[1];
    std::vector<double> shifted = {x[0] - xi0[0], x[1] - xi0[1]};
    const double tshift = t - s0 - 0.5 * symplectic_form(xi0, eta);
    return fx.eval(shifted, tshift);
  });
  CHECK(sup_diff_h(lhs, oracle) < 1e-6 * sup_h(f));

  FixtureRng rng(302);
  VecXc zeta(2);
  zeta << cplx{rng.uniform(-1, 1), rng.uniform(-1, 1)}, cplx{rng.uniform(-1, 1), rng.uniform(-1, 1)};
  const HeisenbergField moved = big_pi_apply(zeta, -0.8, f);
  CHECK(h_l2_norm(moved) == doctest::Approx(h_l2_norm(f)).epsilon(1e-6));
}

TEST_CASE("Heisenberg modulations: identity, U-tilde conjugation, unitarity") {
  const AnalyticFixture fx = make_fixture(311);
  const HeisenbergField f = fx.sample();

  const HeisenbergField id = heisenberg_modulate(VecXd(VecXd::Zero(2)), 0.0, f);
  CHECK(sup_diff_h(id, f) < 1e-10 * sup_h(f));

  VecXd eta0(2);
  eta0 << 0.7, -0.5;
  const double s0 = 0.4;
  const HeisenbergField direct = heisenberg_modulate(eta0, s0, f);
  CHECK(h_l2_norm(direct) == doctest::Approx(h_l2_norm(f)).epsilon(1e-6));

  // e(g) = U-tilde tau(g) U-tilde^*
  const HeisenbergField via_u =
      u_tilde_apply(big_pi_apply(VecXc(eta0.cast<cplx>()), s0, u_tilde_apply(f, true)));
  CHECK(sup_diff_h(direct, via_u) < 1e-5 * sup_h(f));
}

TEST_CASE("U-tilde: heat-kernel fixed point, unitarity, slice agreement") {
  // Field whose slices are p_{1/2}^{lam_k}: a fixed point of U-tilde.
  LambdaStack st;
  st.base_grid = kBase;
  st.t_grid = kT;
  st.lam_grid.resize(32);
  const BoxGrid dual = kT.dual();
  for (int k = 0; k < 32; ++k) st.lam_grid[k] = dual.coord(0, k);
  for (int k = 0; k < 32; ++k)
    st.slices.push_back(heat_kernel_field(TwistParameter(st.lam_grid[k], 1), 0.5, kBase));
  const HeisenbergField p = central_ft(st);
  CHECK(sup_diff_h(u_tilde_apply(p), p) < 1e-5 * sup_h(p));

  const AnalyticFixture fx = make_fixture(321);
  const HeisenbergField f = fx.sample();
  CHECK(h_l2_norm(u_tilde_apply(f)) == doctest::Approx(h_l2_norm(f)).epsilon(1e-5));
  CHECK(sup_diff_h(u_tilde_apply(u_tilde_apply(f), true), f) < 1e-6 * sup_h(f));

  // Slicewise definition agreement with u_lambda_apply.
  const LambdaStack sf = central_inverse_ft(f);
  const LambdaStack su = central_inverse_ft(u_tilde_apply(f));
  double m = 0.0;
  for (std::size_t k = 0; k < sf.slices.size(); ++k) {
    const TwistParameter tw(sf.lam_grid[k], 1);
    const double tol_k = 1e-9 * l2_norm(sf.slices[0]) * l2_norm(sf.slices[0]) /
                         std::max(1e-30, l2_norm(sf.slices[k]) * l2_norm(sf.slices[k]));
    const SampledField direct = u_lambda_apply(tw, sf.slices[k], false, std::max(1e-9, tol_k));
    for (std::size_t b = 0; b < direct.values.size(); ++b)
      m = std::max(m, std::abs(direct.values[b] - su.slices[k].values[b]));
  }
  CHECK(m < 1e-10 * sup_h(f));
}

TEST_CASE("T multiplier: slice scaling, translation commutation, self-adjointness") {
  CHECK(std::sqrt(TwistParameter(1.0, 1).c_lam) ==
        doctest::Approx(std::sqrt(1.0 / (4.0 * kPi * std::sinh(1.0)))).epsilon(1e-12));
  CHECK(std::sqrt(TwistParameter(1.0, 1).c_lam) == doctest::Approx(0.260219).epsilon(1e-5));

  const AnalyticFixture fx = make_fixture(331);
  const HeisenbergField f = fx.sample();
  const LambdaStack sf = central_inverse_ft(f);
  const LambdaStack stf = central_inverse_ft(t_multiplier_apply(f));
  double m = 0.0;
  for (std::size_t k = 0; k < sf.slices.size(); ++k) {
    const double root_c = std::sqrt(TwistParameter(sf.lam_grid[k], 1).c_lam);
    for (std::size_t b = 0; b < sf.slices[k].values.size(); ++b)
      m = std::max(m, std::abs(stf.slices[k].values[b] - root_c * sf.slices[k].values[b]));
  }
  CHECK(m < 1e-10 * sup_h(f));

  VecXd xi0(2);
  xi0 << 0.8, 0.3;
  const HeisenbergField a = t_multiplier_apply(big_pi_apply(VecXc(xi0.cast<cplx>()), 0.0, f));
  const HeisenbergField b = big_pi_apply(VecXc(xi0.cast<cplx>()), 0.0, t_multiplier_apply(f));
  CHECK(sup_diff_h(a, b) < 1e-8 * sup_h(f));

  const AnalyticFixture fy = make_fixture(332);
  const HeisenbergField g = fy.sample();
  const cplx lhs = h_inner(t_multiplier_apply(f), g);
  const cplx rhs = h_inner(f, t_multiplier_apply(g));
  CHECK(std::abs(lhs - rhs) < 1e-8 * std::abs(lhs));
}

TEST_CASE("heat kernels on H^n: slices, symmetry, full-Laplacian damping") {
  const LambdaStack ps = heat_kernel_stack(kBase, kT, 0.5, false);
  const TwistParameter tw7(ps.lam_grid[7], 1);
  const SampledField direct = heat_kernel_field(tw7, 0.5, kBase);
  for (std::size_t b = 0; b < direct.values.size(); ++b)
    CHECK(ps.slices[7].values[b] == direct.values[b]);

  const LambdaStack hs = heat_kernel_stack(kBase, kT, 0.5, true);
  const double damp = std::exp(-0.5 * ps.lam_grid[7] * ps.lam_grid[7]);
  for (std::size_t b = 0; b < direct.values.size(); ++b)
    CHECK(std::abs(hs.slices[7].values[b] - damp * direct.values[b]) <
          1e-14 * std::abs(direct.values[b]) + 1e-300);

  const HeisenbergField p = heat_kernel_sublaplacian(kBase, kT, 0.5);
  double max_imag = 0.0;
  for (const cplx& v : p.values) max_imag = std::max(max_imag, std::abs(v.imag()));
  CHECK(max_imag < 1e-10 * sup_h(p));
  // even in (x, u): value at index k equals value at N-k (wrap row aside)
  std::vector<int> idx = {11, 29};
  std::vector<int> neg = {40 - 11, 40 - 29};
  for (int t = 0; t < kT.npts[0]; ++t)
    CHECK(std::abs(p.at(kBase.flat(idx), t) - p.at(kBase.flat(neg), t)) < 1e-10 * sup_h(p));
}

TEST_CASE("V transform: zero field, Plancherel constancy across fixtures") {
  HeisenbergField zero(kBase, kT);
  const VShearedStack vz = v_transform_sheared(zero, StftMode::fast, 0.0);
  for (const auto& s : vz.slices) CHECK(s.empty());

  std::vector<double> ratios;
  for (std::uint64_t seed : {341u, 342u, 343u}) {
    const HeisenbergField f = make_fixture(seed).sample();
    const std::vector<double> sq = v_slice_l2_sq(f);
    double acc = 0.0;
    for (double v : sq) acc += v;
    acc *= kPi / kT.halfw[0];
    const double nf = h_l2_norm(f);
    ratios.push_back(acc / (nf * nf));
  }
  for (double r : ratios) CHECK(r == doctest::Approx(ratios.front()).epsilon(1e-3));
  // Under this convention sheet the constant is 2 pi 4^{-n}.
  CHECK(ratios.front() == doctest::Approx(0.5 * kPi).epsilon(1e-3));
}

TEST_CASE("fundamental identity V(U-tilde f)_lambda(zeta) = V_lambda f(-i zeta)") {
  const HeisenbergField f = make_fixture(351).sample();
  const BoxGrid ph = BoxGrid::cube(2, 12, 4.0);
  const VStack vf = v_transform(f, ph, ph, StftMode::fast, 1e-6);
  const VStack vu = v_transform(u_tilde_apply(f), ph, ph, StftMode::fast, 1e-6);

  double supv = 0.0;
  for (const auto& s : vf.slices)
    for (const cplx& v : s) supv = std::max(supv, std::abs(v));

  auto negf = [&](std::size_t flat) {
    std::vector<int> idx(2);
    ph.unflat(flat, idx);
    idx[0] = (ph.npts[0] - idx[0]) % ph.npts[0];
    idx[1] = (ph.npts[1] - idx[1]) % ph.npts[1];
    return ph.flat(idx);
  };
  const std::size_t neta = ph.size();
  double m = 0.0;
  for (std::size_t k = 0; k < vf.slices.size(); ++k) {
    if (vf.slices[k].empty() || vu.slices[k].empty()) continue;
    std::vector<int> idx(2);
    for (std::size_t i = 0; i < neta; ++i) {
      ph.unflat(i, idx);
      if (idx[0] == 0 || idx[1] == 0) continue;  // wrap rows of the negation
      for (std::size_t j = 0; j < neta; ++j) {
        ph.unflat(j, idx);
        if (idx[0] == 0 || idx[1] == 0) continue;
        // -i zeta = (eta, -xi): xi-index <- j's coordinate, eta-index <- neg(i)
        m = std::max(m, std::abs(vu.slices[k][i * neta + j] -
                                 vf.slices[k][j * neta + negf(i)]));
      }
    }
  }
  CHECK(m / supv < 1e-4);
}

TEST_CASE("V adjoint inverts V up to the registry constant") {
  std::vector<double> constants;
  for (std::uint64_t seed : {361u, 362u}) {
    const HeisenbergField f = make_fixture(seed).sample();
    const VShearedStack V = v_transform_sheared(f, StftMode::fast, 1e-7);
    const HeisenbergField back = v_adjoint_sheared(V, kBase, kT);
    const double nf = h_l2_norm(f);
    const double c = (h_inner(back, f) / (nf * nf)).real();
    constants.push_back(c);
    double m = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
      m = std::max(m, std::abs(back.values[i] - c * f.values[i]));
    CHECK(m < 1e-3 * c * sup_h(f));
  }
  for (double c : constants) CHECK(c == doctest::Approx(constants.front()).epsilon(1e-3));
  CHECK(constants.front() == doctest::Approx(0.25).epsilon(1e-3));  // d_n = 4^{-n}

  // V Vtilde is idempotent on the image (band-limited fixtures) and
  // self-adjoint in the slice pairing.
  const HeisenbergField f = make_fixture(363).sample();
  const HeisenbergField g = make_fixture(364).sample();
  HeisenbergField sum = f;
  for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += g.values[i];
  const VShearedStack common = v_transform_sheared(sum, StftMode::fast, 1e-7);

  const VShearedStack F = v_transform_sheared(f, common.meshes, StftMode::fast);
  const VShearedStack G = v_transform_sheared(g, common.meshes, StftMode::fast);
  auto apply_T = [&](const VShearedStack& S) {
    return v_transform_sheared(v_adjoint_sheared(S, kBase, kT), common.meshes, StftMode::fast);
  };
  const VShearedStack TF = apply_T(F);
  const VShearedStack TG = apply_T(G);

  // idempotency: T(TF) = c TF with the same constant c.
  const VShearedStack TTF = apply_T(TF);
  double mi = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < TF.slices.size(); ++k) {
    if (TF.slices[k].empty() || TTF.slices[k].empty()) continue;
    for (std::size_t i = 0; i < TF.slices[k].size(); ++i) {
      mi = std::max(mi, std::abs(TTF.slices[k][i] - constants.front() * TF.slices[k][i]));
      scale = std::max(scale, constants.front() * std::abs(TF.slices[k][i]));
    }
  }
  CHECK(mi < 1e-3 * scale);

  auto pair = [&](const VShearedStack& A, const VShearedStack& B) {
    cplx acc{0.0, 0.0};
    for (std::size_t k = 0; k < A.slices.size(); ++k) {
      if (A.slices[k].empty() || B.slices[k].empty()) continue;
      cplx s{0.0, 0.0};
      for (std::size_t i = 0; i < A.slices[k].size(); ++i)
        s += A.slices[k][i] * std::conj(B.slices[k][i]);
      acc += s * A.meshes[k].node_weight * A.dlam;
    }
    return acc;
  };
  const cplx lhs = pair(TF, G);
  const cplx rhs = pair(F, TG);
  CHECK(std::abs(lhs - rhs) < 1e-4 * std::abs(lhs));
}

TEST_CASE("K_lambda: peak, unit mass, mixed-norm lambda shape") {
  for (double lam : {0.5, 1.0, 2.0}) {
    const TwistParameter tw(lam, 1);
    CHECK(k_lambda_kernel(tw, VecXd(VecXd::Zero(2)), VecXd(VecXd::Zero(2))) ==
          doctest::Approx(tw.c_lam * tw.c_lam).epsilon(1e-14));
    CHECK(k_lambda_mass_quadrature(tw) == doctest::Approx(1.0).epsilon(1e-6));
  }
  for (auto rs : {std::pair{1.0, 2.0}, std::pair{2.0, 2.0}}) {
    std::vector<double> ratio;
    for (double lam : {0.5, 1.0, 2.0, 4.0}) {
      const TwistParameter tw(lam, 1);
      ratio.push_back(k_lambda_mixed_norm_quadrature(tw, rs.first, rs.second) /
                      k_lambda_mixed_norm_shape(tw, rs.first, rs.second));
    }
    for (double r : ratio) CHECK(r == doctest::Approx(ratio.front()).epsilon(1e-4));
  }
}

TEST_CASE("M^{p,q}(H^n) norms: Fubini collapse and single-tone concentration") {
  const HeisenbergField f = make_fixture(371).sample();
  const BoxGrid ph = BoxGrid::cube(2, 10, 4.0);
  const double m22 = m_pq_heisenberg_norm(f, {2.0, 2.0}, ph, ph);
  const double m1_22 = m1_norm(f, {2.0, 2.0}, ph, ph);
  CHECK(m22 == doctest::Approx(m1_22).epsilon(1e-6));

  // Pure tone at an on-grid lambda: exactly one active slice.
  const double lam_star = kT.dual().coord(0, 20);
  FixtureRng rng(372);
  const GaussianMixture mix = random_mixture(rng, 2, 1, 0.8, 0.9, 1.0, 0.5);
  HeisenbergField tone(kBase, kT);
  // e^{-i lam* t}: under f^lam = Int f e^{+i lam t} dt this concentrates the
  // central spectrum exactly at +lam*.
  tone.fill([&](std::span<const double> x, double t) {
    return mix.eval(x) * cplx{std::cos(lam_star * t), -std::sin(lam_star * t)};
  });
  const MixedNormSpec spec{1.0, 2.0};
  const double m_tone = m1_norm(tone, spec, ph, ph);
  // slice mass: sqrt(dlam) times the slice M_lambda norm
  const LambdaStack st = central_inverse_ft(tone);
  const TwistParameter tws(lam_star, 1);
  const Window w = Window::heat_half(tws, kBase);
  PhaseField V(ph, ph);
  {
    VStack vs = v_transform(tone, ph, ph, StftMode::fast, 1e-6);
    const std::size_t k_star = 20;
    REQUIRE(!vs.slices[k_star].empty());
    V.values = vs.slices[k_star];
  }
  const double slice_norm = mixed_norm_lpq(V, spec) * std::sqrt(kPi / kT.halfw[0]);
  CHECK(m_tone == doctest::Approx(slice_norm).epsilon(0.02));
}

TEST_CASE("Heisenberg Bargmann transform: two routes and the Gaussian identity") {
  const HeisenbergField f = make_fixture(381).sample();
  VecXc zeta(2);
  zeta << cplx{0.6, -0.3}, cplx{-0.4, 0.5};

  HeisenbergField zero(kBase, kT);
  const auto zvals = bargmann_heisenberg(zero, zeta, {cplx{0.3, 0.2}});
  CHECK(std::abs(zvals[0]) == 0.0);

  // Route A (slice formula) vs route B (operators on H^n) at real s.
  const double s0 = 0.7;
  const cplx route_a = bargmann_heisenberg(f, zeta, {cplx{s0, 0.0}})[0];
  const HeisenbergField h = heat_kernel_sublaplacian(kBase, kT, 0.5, /*full_laplacian=*/true);
  const HeisenbergField tf = t_multiplier_apply(f);
  const HeisenbergField pih = big_pi_apply(zeta, s0, h);
  const cplx route_b = std::exp(0.25 * s0 * s0) * h_inner(tf, pih);
  CHECK(std::abs(route_a - route_b) < 1e-4 * std::abs(route_a));

  // Bargmann identity: Int_C |B_H|^2 e^{-|s|^2/2} dA(s) = c Int |V_lam|^2 dlam
  // with c independent of zeta.
  const LambdaStack st = central_inverse_ft(f);
  std::vector<double> cs;
  for (const auto& zpt : {zeta, VecXc(cplx{0.0, 1.0} * zeta), VecXc(0.5 * zeta)}) {
    std::vector<cplx> spts;
    const int ns = 30;
    const double shalf = 7.0;
    const double ds = 2.0 * shalf / ns;
    for (int a = 0; a < ns; ++a)
      for (int b = 0; b < ns; ++b)
        spts.push_back(cplx{-shalf + (a + 0.5) * ds, -shalf + (b + 0.5) * ds});
    const auto bh = bargmann_heisenberg(f, zpt, spts);
    double lhs = 0.0;
    for (std::size_t i = 0; i < spts.size(); ++i)
      lhs += std::norm(bh[i]) * std::exp(-0.5 * std::norm(spts[i]));
    lhs *= ds * ds;

    double rhs = 0.0;
    for (std::size_t k = 0; k < st.lam_grid.size(); ++k) {
      const TwistParameter tw(st.lam_grid[k], 1);
      const cplx v = weighted_bargmann_at(tw, st.slices[k], {zpt})[0];
      rhs += std::norm(v) * st.dlam();
    }
    cs.push_back(lhs / rhs);
  }
  for (double c : cs) CHECK(c == doctest::Approx(cs.front()).epsilon(1e-3));

  // pointwise estimate on real s: measured constant reported.
  double cmax = 0.0;
  double rhs = 0.0;
  for (std::size_t k = 0; k < st.lam_grid.size(); ++k) {
    const TwistParameter tw(st.lam_grid[k], 1);
    const cplx v = weighted_bargmann_at(tw, st.slices[k], {zeta})[0];
    rhs += std::norm(v) * st.dlam();
  }
  for (double s : {-3.0, -1.0, 0.0, 0.8, 2.2}) {
    const cplx bh = bargmann_heisenberg(f, zeta, {cplx{s, 0.0}})[0];
    cmax = std::max(cmax, std::norm(bh) / (std::exp(0.5 * s * s) * rhs));
  }
  CHECK(std::isfinite(cmax));
  MESSAGE("esti-point measured constant: ", cmax);
}

TEST_CASE("duality bracket: Plancherel value, band separation, Hoelder") {
  const HeisenbergField f = make_fixture(391).sample();
  const BoxGrid ph = BoxGrid::cube(2, 10, 4.0);

  // <f,f>_0 via mass-complete slices: the Plancherel chain constant.
  const std::vector<double> sq = v_slice_l2_sq(f);
  double bracket_ff = 0.0;
  for (double v : sq) bracket_ff += v;
  bracket_ff *= kPi / kT.halfw[0];
  const double nf = h_l2_norm(f);
  CHECK(bracket_ff / (nf * nf) == doctest::Approx(0.5 * kPi).epsilon(1e-3));

  // Disjoint central bands pair to zero.
  const BoxGrid dual = kT.dual();
  FixtureRng rng(392);
  const GaussianMixture mix = random_mixture(rng, 2, 1, 0.8, 0.9, 1.0, 0.5);
  auto tone = [&](int k) {
    HeisenbergField h(kBase, kT);
    const double lam = dual.coord(0, k);
    h.fill([&](std::span<const double> x, double t) {
      return mix.eval(x) * cplx{std::cos(lam * t), -std::sin(lam * t)};
    });
    return h;
  };
  const HeisenbergField fa = tone(18), fb = tone(22);
  const cplx sep = dual_bracket(fa, fb, ph, ph);
  const cplx self = dual_bracket(fa, fa, ph, ph);
  CHECK(std::abs(sep) < 1e-6 * std::abs(self));

  // Hoelder with the measured norms.
  const HeisenbergField g = make_fixture(393).sample();
  const cplx br = dual_bracket(f, g, ph, ph);
  const double lhs = std::abs(br);
  const double rhs = m_pq_heisenberg_norm(f, {1.5, 2.0}, ph, ph) *
                     m_pq_heisenberg_norm(g, {3.0, 2.0}, ph, ph);
  CHECK(lhs <= rhs * (1.0 + 1e-9));
}

TEST_CASE("M^{p,q}(H^n): translation invariance and the inclusion bound") {
  const HeisenbergField f = make_fixture(401).sample();

  // (2,2): mass-complete norms are translation invariant.
  auto m22 = [&](const HeisenbergField& h) {
    const std::vector<double> sq = v_slice_l2_sq(h);
    double acc = 0.0;
    for (double v : sq) acc += v;
    return std::sqrt(acc * kPi / kT.halfw[0]);
  };
  VecXd xi0(2);
  xi0 << 0.8, -0.4;
  const HeisenbergField moved = big_pi_apply(VecXc(xi0.cast<cplx>()), 0.6, f);
  CHECK(m22(moved) == doctest::Approx(m22(f)).epsilon(1e-4));

  // modulation invariance (imaginary zeta)
  const HeisenbergField modded = heisenberg_modulate(xi0, -0.3, f);
  CHECK(m22(modded) == doctest::Approx(m22(f)).epsilon(1e-4));

  // mixed-norm invariance on the shared product lattice
  const BoxGrid ph = BoxGrid::cube(2, 12, 5.0);
  const MixedNormSpec spec{1.0, 2.0};
  const double base = m_pq_heisenberg_norm(f, spec, ph, ph);
  VecXd small(2);
  small << 0.3, -0.2;
  const double shifted = m_pq_heisenberg_norm(big_pi_apply(VecXc(small.cast<cplx>()), 0.4, f),
                                              spec, ph, ph);
  CHECK(shifted == doctest::Approx(base).epsilon(1e-3));

  // p = p invariance under U-tilde
  const MixedNormSpec pp{1.5, 1.5};
  const double u_base = m_pq_heisenberg_norm(f, pp, ph, ph);
  const double u_turn = m_pq_heisenberg_norm(u_tilde_apply(f), pp, ph, ph);
  CHECK(u_turn == doctest::Approx(u_base).epsilon(1e-3));

  // inclusion (1,1) -> (2,2) with the K_lambda-derived constant.
  const LambdaStack st = central_inverse_ft(f);
  double cbound = 0.0;
  for (double lam : st.lam_grid)
    cbound = std::max(cbound,
                      k_lambda_mixed_norm_quadrature(TwistParameter(lam, 1), 2.0, 2.0) / 0.25);
  const double n11 = m_pq_heisenberg_norm(f, {1.0, 1.0}, ph, ph);
  const double n22 = m_pq_heisenberg_norm(f, {2.0, 2.0}, ph, ph);
  CHECK(n22 <= cbound * n11 * (1.0 + 1e-3));
}

TEST_CASE("non-square-integrability witness: the lambda integrand grows like (sinh/lam)^2") {
  // Fixture with a Gaussian spatial factor so every slice's window is known.
  FixtureRng rng(411);
  const GaussianMixture fmix = random_mixture(rng, 2, 2, 0.8, 0.9, 1.1, 0.6);
  const double gw = 0.8;
  HeisenbergField f(kBase, kT), g(kBase, kT);
  f.fill([&](std::span<const double> x, double t) {
    return fmix.eval(x) * std::exp(-t * t / 4.5);
  });
  g.fill([&](std::span<const double> x, double t) {
    return std::exp(-(x[0] * x[0] + x[1] * x[1]) / (2.0 * gw * gw)) * std::exp(-t * t / 3.2);
  });
  const LambdaStack sf = central_inverse_ft(f);
  const LambdaStack sg = central_inverse_ft(g);
  const Window wg = Window::gaussian(kBase, 1.0, {0.5 / (gw * gw), 0.5 / (gw * gw)}, {0.0, 0.0});

  for (std::size_t k : {13u, 16u, 20u}) {
    const TwistParameter tw(sf.lam_grid[k], 1);
    const double gscale = std::abs(sg.slices[k].values[kBase.flat(std::vector<int>{20, 20})] /
                                   wg.samples.values[kBase.flat(std::vector<int>{20, 20})]);
    const ShearedMesh mesh = default_sheared_mesh(tw, sf.slices[k], wg);
    const auto vals = twisted_stft_on_mesh(tw, sf.slices[k], wg, mesh, StftMode::fast);
    const double mass = mesh_l2_sq(mesh, vals) * gscale * gscale;
    const double expected = std::pow(2.0 * kPi / tw.lam_over_sinh, 2) *
                            l2_norm(sf.slices[k]) * l2_norm(sf.slices[k]) *
                            l2_norm(sg.slices[k]) * l2_norm(sg.slices[k]);
    CHECK(mass == doctest::Approx(expected).epsilon(1e-3));
  }
}

TEST_CASE("lambda stack serialization round-trips") {
  const LambdaStack st = heat_kernel_stack(BoxGrid::cube(2, 12, 6.0), BoxGrid::cube(1, 8, 4.0),
                                           0.5, false);
  const std::string path =
      (std::filesystem::temp_directory_path() / "ttfa_stack_test.json").string();
  save_stack(st, path);
  const LambdaStack back = load_stack(path);
  CHECK(back.base_grid == st.base_grid);
  CHECK(back.t_grid == st.t_grid);
  REQUIRE(back.lam_grid.size() == st.lam_grid.size());
  for (std::size_t k = 0; k < st.slices.size(); ++k)
    for (std::size_t b = 0; b < st.slices[k].values.size(); ++b)
      CHECK(back.slices[k].values[b] == st.slices[k].values[b]);
}
