// Acceptance suite: every criterion at its stated tolerance, one PASS/FAIL
// line each, desk scale (n=1, base 48^2 on [-10,10)^2, phase box |xi|,|eta|<=4,
// t-grid 64 on [-16,16)).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "ttfa/fixtures.hpp"
#include "ttfa/heisenberg.hpp"
#include "ttfa/registry.hpp"

using namespace ttfa;

namespace {

int g_failures = 0;

void report(const char* id, bool pass, double measured, double bound, const char* note) {
  std::printf("[%s] %-34s measured=%.6g bound=%.6g %s\n", pass ? "PASS" : "FAIL", id, measured,
              bound, note);
  if (!pass) ++g_failures;
}

double sup_abs_field(const SampledField& f) {
  double m = 0.0;
  for (const cplx& v : f.values) m = std::max(m, std::abs(v));
  return m;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

}  // namespace

int main() {
  const BoxGrid base = desk_base_grid();
  const BoxGrid tg = desk_t_grid();
  const BoxGrid phase = desk_phase_xi();
  ConstantsRegistry reg(1);

  // ---- 1. det Lambda closed form -----------------------------------------
  {
    double worst = 0.0;
    for (double lam : {0.1, 0.5, 1.0, 2.0, 4.0}) {
      const TwistParameter tw(lam, 1);
      const double det = build_lambda_matrix(tw).determinant();
      worst = std::max(worst, std::abs(det - lambda_matrix_det_closed_form(tw)) /
                                  lambda_matrix_det_closed_form(tw));
    }
    report("1.det_lambda", worst < 1e-9, worst, 1e-9, "direct 4x4 det vs (lam/sinh lam)^2");
  }

  // ---- 2. twisted Plancherel ----------------------------------------------
  {
    double worst = 0.0;
    double at_one = 0.0;
    FixtureRng wrng(9001);
    for (int pair = 0; pair < 5; ++pair) {
      const SampledField f = random_field(base, 9100 + pair, 2);
      const double wamp = wrng.uniform(0.6, 1.0);
      const double wa = wrng.uniform(0.35, 0.6);
      const double wb = wrng.uniform(0.35, 0.6);
      const Window g = Window::gaussian(base, wamp, {wa, wb},
                                        {wrng.uniform(-0.5, 0.5), wrng.uniform(-0.5, 0.5)});
      for (double lam : {0.5, 1.0, 2.0}) {
        const TwistParameter tw(lam, 1);
        const ShearedMesh mesh = default_sheared_mesh(tw, f, g);
        const auto vals = twisted_stft_on_mesh(tw, f, g, mesh, StftMode::fast);
        const double nf = l2_norm(f), ng = l2_norm(g.samples);
        const double ratio = mesh_l2_sq(mesh, vals) / (nf * nf * ng * ng);
        const double target = std::pow(2.0 * kPi / tw.lam_over_sinh, 2);
        worst = std::max(worst, std::abs(ratio - target) / target);
        if (lam == 1.0 && pair == 0) at_one = ratio;
      }
    }
    const bool pass = worst < 1e-3 && std::abs(at_one - 54.53) <= 0.05;
    char note[96];
    std::snprintf(note, sizeof note, "(2pi)^2(sinh/lam)^2; at lam=1: %.4f (54.53 +- 0.05)",
                  at_one);
    report("2.twisted_plancherel", pass, worst, 1e-3, note);
  }

  // ---- 3. kernel mass ------------------------------------------------------
  {
    double worst = 0.0;
    for (double lam : {0.5, 1.0, 2.0})
      worst = std::max(worst, std::abs(k_lambda_mass_quadrature(TwistParameter(lam, 1)) - 1.0));
    report("3.kernel_mass", worst < 1e-5, worst, 1e-5, "Int K_lambda = 1.000000");
  }

  // ---- 4. reproducing property --------------------------------------------
  {
    const TwistParameter tw(1.0, 1);
    const double d_n = reg.get("d_n_repker");
    const SampledField f = random_field(base, 9200, 2);
    const Window w = Window::heat_half(tw, base);
    const ShearedMesh mesh = default_sheared_mesh(tw, f, w);
    FixtureRng rng(9201);
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
      VecXc z(2);
      z << cplx{rng.uniform(-1.4, 1.4), rng.uniform(-1.0, 1.0)},
          cplx{rng.uniform(-1.4, 1.4), rng.uniform(-1.0, 1.0)};
      const cplx direct = bargmann_at(tw, f, {z})[0];
      const cplx pair = fock_kernel_pair_on_mesh(tw, f, mesh, z, d_n);
      worst = std::max(worst, std::abs(pair - direct) / std::abs(direct));
    }
    report("4.reproducing_property", worst < 1e-4, worst, 1e-4,
           "after d_n registry calibration");
  }

  // ---- 5. intertwining -----------------------------------------------------
  {
    const SampledField f = random_tight_field(base, 9300, 2);
    const double scale = sup_abs_field(f);
    FixtureRng rng(9301);
    double worst = 0.0;
    for (double lam : {0.5, 1.0}) {
      const TwistParameter tw(lam, 1);
      for (int t = 0; t < 5; ++t) {
        VecXd eta(2);
        eta << rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2);
        const SampledField direct = twisted_modulate(tw, eta, f);
        const SampledField via_u =
            u_lambda_apply(tw, twisted_translate(tw, eta, u_lambda_apply(tw, f, true)));
        double m = 0.0;
        for (std::size_t i = 0; i < f.values.size(); ++i)
          m = std::max(m, std::abs(direct.values[i] - via_u.values[i]));
        worst = std::max(worst, m / scale);
      }
    }
    report("5.intertwining", worst < 1e-6, worst, 1e-6, "e_lam vs U tau U^*, 5 eta x 2 lambda");
  }

  // ---- 6. inversion / window independence ---------------------------------
  {
    std::vector<double> constants;
    for (double lam : {0.5, 1.0, 2.0}) {
      const TwistParameter tw(lam, 1);
      const Window canonical = Window::heat_half(tw, base);
      const Window gaussian = Window::gaussian(base, 0.8, {0.31, 0.44}, {0.0, 0.0});
      for (const Window* g : {&canonical, &gaussian}) {
        for (int fi = 0; fi < 5; ++fi) {
          const SampledField f = random_field(base, 9400 + fi, 2);
          const ShearedMesh mesh = default_sheared_mesh(tw, f, *g, 22, 6.8);
          const auto vals = twisted_stft_on_mesh(tw, f, *g, mesh, StftMode::fast);
          const SampledField synth = stft_synthesis_on_mesh(tw, mesh, vals, *g, base);
          const double ng = l2_norm(g->samples), nf = l2_norm(f);
          constants.push_back(tw.c_lam * tw.c_lam * inner_product(synth, f).real() /
                              (ng * ng * nf * nf));
        }
      }
    }
    double worst = 0.0;
    for (double c : constants)
      worst = std::max(worst, std::abs(c - constants.front()) / std::abs(constants.front()));
    report("6.inversion_constant", worst < 1e-3, worst, 1e-3,
           "c in Vtilde_g(V_g f) = c ||g||^2 f over 5 f x 2 windows x 3 lambda");
  }

  // ---- 7. ladder identities ------------------------------------------------
  {
    const TwistParameter tw(1.0, 1);
    const SampledField f = random_field(base, 9500, 2);
    const double a = tw.c_half;
    const cplx b{0.0, 0.5 * tw.lam};
    const cplx denom = cplx{a * a, 0.0} + b * b;
    const SampledField af = ladder_apply(tw, 0, LadderOp::A, f);
    const SampledField bf = ladder_apply(tw, 0, LadderOp::B, f);
    SampledField ca(base), cb(base);
    for (std::size_t i = 0; i < ca.values.size(); ++i) {
      ca.values[i] = a * af.values[i] - b * bf.values[i];
      cb.values[i] = b * af.values[i] + a * bf.values[i];
    }
    FixtureRng rng(9501);
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
      VecXc z(2);
      z << cplx{rng.uniform(-1.2, 1.2), rng.uniform(-0.9, 0.9)},
          cplx{rng.uniform(-1.2, 1.2), rng.uniform(-0.9, 0.9)};
      const cplx bfz = bargmann_at(tw, f, {z})[0];
      const cplx lhs_a = -denom * z[0] * bfz;
      worst = std::max(worst, std::abs(lhs_a - bargmann_at(tw, ca, {z})[0]) / std::abs(lhs_a));
      const cplx lhs_b = denom * z[1] * bfz;
      worst = std::max(worst, std::abs(lhs_b - bargmann_at(tw, cb, {z})[0]) / std::abs(lhs_b));
    }
    report("7.ladder_identities", worst < 1e-4, worst, 1e-4, "both identities, 5 interior zeta");
  }

  // ---- 8. Heisenberg Plancherel --------------------------------------------
  {
    std::vector<double> ratios;
    for (int fi = 0; fi < 5; ++fi) {
      const HeisenbergField f = random_heisenberg_field(base, tg, 9600 + fi, 2);
      const std::vector<double> sq = v_slice_l2_sq(f);
      double acc = 0.0;
      for (double v : sq) acc += v;
      const double nf = h_l2_norm(f);
      ratios.push_back(acc * (kPi / tg.halfw[0]) / (nf * nf));
    }
    double worst = 0.0;
    for (double r : ratios) worst = std::max(worst, std::abs(r - ratios.front()) / ratios.front());
    report("8.heisenberg_plancherel", worst < 1e-3, worst, 1e-3,
           "sum ||V_lam f||^2 dlam / ||f||^2 constant over 5 fixtures");
  }

  // ---- 9. fundamental identity ---------------------------------------------
  {
    const HeisenbergField f = random_heisenberg_field(base, tg, 9700, 2);
    const BoxGrid ph = BoxGrid::cube(2, 12, 4.0);  // symmetric sublattice of the desk box
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
    std::vector<int> idx(2);
    double m = 0.0;
    for (std::size_t k = 0; k < vf.slices.size(); ++k) {
      if (vf.slices[k].empty() || vu.slices[k].empty()) continue;
      for (std::size_t i = 0; i < neta; ++i) {
        ph.unflat(i, idx);
        if (idx[0] == 0 || idx[1] == 0) continue;
        for (std::size_t j = 0; j < neta; ++j) {
          ph.unflat(j, idx);
          if (idx[0] == 0 || idx[1] == 0) continue;
          m = std::max(m, std::abs(vu.slices[k][i * neta + j] - vf.slices[k][j * neta + negf(i)]));
        }
      }
    }
    report("9.fundamental_identity", m / supv < 1e-4, m / supv, 1e-4,
           "V(U-tilde f)(zeta) = V f(-i zeta) on the symmetric lattice");
  }

  // ---- 10. inequality battery ----------------------------------------------
  {
    // (a) twisted Young with the sharp t-con constants
    int young_viol = 0;
    const TwistParameter tw(1.0, 1);
    for (int t = 0; t < 20; ++t) {
      const SampledField f = random_field(base, 9800 + t, 2);
      const SampledField g = random_field(base, 9900 + t, 2);
      const SampledField fg = twisted_convolve(tw, f, g, ConvMode::fast);
      for (double p : {1.0, 1.5, 2.0}) {
        const double cp = std::pow(2.0 * kPi / std::abs(tw.lam), 1.0 - 1.0 / p);
        if (lp_norm(fg, p) > cp * lp_norm(f, p) * lp_norm(g, p) * (1.0 + 1e-3)) ++young_viol;
      }
    }
    report("10a.twisted_young", young_viol == 0, young_viol, 0,
           "p in {1,1.5,2}, C_p(lam) = (2pi/lam)^{1-1/p}, 20 pairs");

    // (b) pointwise synthesis-analysis bound
    int point_viol = 0;
    {
      const Window g = Window::heat_half(tw, base);
      const Window h = Window::gaussian(base, 0.9, {0.5, 0.6}, {0.0, 0.0});
      const BoxGrid php = BoxGrid::cube(2, 7, 2.8);
      const int np = php.npts[0];
      const int nd = 2 * np - 1;
      std::vector<std::pair<VecXd, VecXd>> dn;
      auto dc = [&](int k) { return (k - (np - 1)) * php.spacing(0); };
      for (int a2 = 0; a2 < nd; ++a2)
        for (int b2 = 0; b2 < nd; ++b2)
          for (int c2 = 0; c2 < nd; ++c2)
            for (int d2 = 0; d2 < nd; ++d2) {
              VecXd xi(2), eta(2);
              xi << dc(a2), dc(b2);
              eta << dc(c2), dc(d2);
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
      for (int t = 0; t < 20; ++t) {
        PhaseField F(php, php);
        FixtureRng rng(9950 + t);
        for (auto& v : F.values) v = cplx{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const SampledField synth = twisted_stft_adjoint(tw, F, g);
        const PhaseField lhs = twisted_stft(tw, synth, h, php, php, StftMode::fast);
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
          if (std::abs(lhs.values[i]) > conv * vol * (1.0 + 1e-3)) {
            ++point_viol;
            break;
          }
        }
      }
    }
    report("10b.pointwise_bound", point_viol == 0, point_viol, 0,
           "|V_h Vtilde_g F| <= |F| * |V_g h|, 20 random F");

    // (c) M^{p,q}(H^n) inclusion and (d) dual-bracket Hoelder on 20 fixtures
    int inc_viol = 0, hold_viol = 0;
    {
      const BoxGrid lbase = BoxGrid::cube(2, 40, 9.0);
      const BoxGrid ltg = BoxGrid::cube(1, 32, 12.0);
      const BoxGrid ph = BoxGrid::cube(2, 10, 4.0);
      const double d_n = reg.get("d_n_orth");
      std::vector<HeisenbergField> pool;
      std::vector<double> n11(20), n22(20), n_h1(20), n_h2(20);
      std::vector<VStack> stacks;
      for (int t = 0; t < 20; ++t)
        pool.push_back(random_heisenberg_field(lbase, ltg, 10000 + t, 2));
      double cbound = 0.0;
      {
        const LambdaStack st = central_inverse_ft(pool[0]);
        for (double lam : st.lam_grid)
          cbound = std::max(cbound,
                            k_lambda_mixed_norm_quadrature(TwistParameter(lam, 1), 2.0, 2.0) / d_n);
      }
      for (int t = 0; t < 20; ++t) {
        n11[t] = m_pq_heisenberg_norm(pool[t], {1, 1}, ph, ph);
        n22[t] = m_pq_heisenberg_norm(pool[t], {2, 2}, ph, ph);
        n_h1[t] = m_pq_heisenberg_norm(pool[t], {1.5, 2.0}, ph, ph);
        n_h2[t] = m_pq_heisenberg_norm(pool[t], {3.0, 2.0}, ph, ph);
        if (n22[t] > cbound * n11[t] * (1.0 + 1e-3)) ++inc_viol;
      }
      for (int t = 0; t < 20; ++t) {
        const int u = (t + 1) % 20;
        const cplx br = dual_bracket(pool[t], pool[u], ph, ph);
        if (std::abs(br) > n_h1[t] * n_h2[u] * (1.0 + 1e-3)) ++hold_viol;
      }
    }
    report("10c.heisenberg_inclusion", inc_viol == 0, inc_viol, 0,
           "||f||_(2,2) <= C ||f||_(1,1), C from the K_lambda bound, 20 fixtures");
    report("10d.dual_hoelder", hold_viol == 0, hold_viol, 0,
           "|<f,g>_0| <= ||f||_(p,q) ||g||_(p',q'), 20 pairs");
  }

  // ---- 11. fast-path equivalence and timing ---------------------------------
  {
    const TwistParameter tw(1.0, 1);
    const SampledField f = random_field(base, 11000, 2);
    const Window g = Window::heat_half(tw, base);

    Timer t_fast;
    const PhaseField vfast = twisted_stft(tw, f, g, phase, phase, StftMode::fast);
    const double fast_s = t_fast.seconds();

    Timer t_quad;
    const PhaseField vquad = twisted_stft(tw, f, g, phase, phase, StftMode::quadrature);
    const double quad_s = t_quad.seconds();

    double sup_fd = 0.0, scale = l2_norm(f) * l2_norm(g.samples);
    for (std::size_t i = 0; i < vfast.values.size(); ++i)
      sup_fd = std::max(sup_fd, std::abs(vfast.values[i] - vquad.values[i]));

    // operator-composition oracle over the full lattice (the slow reference)
    Timer t_op;
    const PhaseField vop = twisted_stft(tw, f, g, phase, phase, StftMode::direct);
    const double op_s = t_op.seconds();
    double sup_od = 0.0;
    for (std::size_t i = 0; i < vfast.values.size(); ++i)
      sup_od = std::max(sup_od, std::abs(vfast.values[i] - vop.values[i]));

    const SampledField g2 = random_field(base, 11001, 2);
    Timer t_cd;
    const SampledField cd = twisted_convolve(tw, f, g2, ConvMode::direct);
    const double conv_direct_s = t_cd.seconds();
    Timer t_cf;
    const SampledField cf = twisted_convolve(tw, f, g2, ConvMode::fast);
    const double conv_fast_s = t_cf.seconds();
    double sup_c = 0.0;
    for (std::size_t i = 0; i < cd.values.size(); ++i)
      sup_c = std::max(sup_c, std::abs(cd.values[i] - cf.values[i]));

    std::printf("\ntiming table (desk lattice %d^4 phase, %d^2 base)\n", phase.npts[0],
                base.npts[0]);
    std::printf("  op                          time[s]   vs fast\n");
    std::printf("  twisted_stft fast           %8.3f      1.0x\n", fast_s);
    std::printf("  twisted_stft quadrature     %8.3f   %6.1fx\n", quad_s, quad_s / fast_s);
    std::printf("  twisted_stft direct(op)     %8.3f   %6.1fx\n", op_s, op_s / fast_s);
    std::printf("  twisted_convolve fast       %8.3f      1.0x\n", conv_fast_s);
    std::printf("  twisted_convolve direct     %8.3f   %6.1fx\n\n", conv_direct_s,
                conv_direct_s / conv_fast_s);

    const bool pass = sup_fd < 1e-6 * scale && sup_od < 1e-6 * scale && sup_c < 1e-8 &&
                      op_s / fast_s >= 20.0 && conv_direct_s / conv_fast_s >= 20.0;
    char note[128];
    std::snprintf(note, sizeof note, "stft sup %.2e/%.2e conv sup %.2e speedups %.0fx/%.0fx",
                  sup_fd / scale, sup_od / scale, sup_c, op_s / fast_s,
                  conv_direct_s / conv_fast_s);
    report("11.fast_path", pass, op_s / fast_s, 20.0, note);
  }

  std::printf("\nacceptance: %s (%d failure%s)\n", g_failures == 0 ? "ALL CRITERIA PASS" : "FAILURES",
              g_failures, g_failures == 1 ? "" : "s");
  return g_failures == 0 ? 0 : 1;
}
