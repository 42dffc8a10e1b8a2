// ttfa - verification CLI for the twisted time-frequency analysis library.
//
//   ttfa verify <suite> [--config path] [--lambda l ...] [--pq p,q ...] [--out dir]
//   ttfa transform <op> --in field.json --out field.json [params]
//
// Exit codes: 0 pass, 1 check failure, 2 config error, 3 I/O error.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>

#include "ttfa/heisenberg.hpp"
#include "ttfa/suites.hpp"

#include <json.hpp>

using namespace ttfa;

namespace {

int run_verify(const std::string& suite, const std::string& config_path,
               const std::vector<double>& lambdas, const std::vector<std::string>& pqs,
               const std::string& out_dir) {
  SuiteConfig cfg;
  try {
    if (!config_path.empty()) cfg = SuiteConfig::from_json_file(config_path);
    if (!lambdas.empty()) cfg.lambda_list = lambdas;
    if (!pqs.empty()) {
      cfg.pq_list.clear();
      for (const auto& s : pqs) {
        const auto comma = s.find(',');
        if (comma == std::string::npos) throw ttfa_error("config: --pq expects p,q");
        cfg.pq_list.push_back({std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))});
      }
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    cfg.validate();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }

  try {
    const std::string reg_path =
        cfg.registry_path.empty()
            ? (cfg.out_dir.empty() ? "ttfa_registry.json" : cfg.out_dir + "/ttfa_registry.json")
            : cfg.registry_path;
    ConstantsRegistry reg = ConstantsRegistry::load_or_default(reg_path, cfg.n);
    const SuiteReport report = run_suite(cfg, suite, reg);
    report.print_summary();
    if (!cfg.out_dir.empty()) {
      std::filesystem::create_directories(cfg.out_dir);
      report.write_json(cfg.out_dir + "/report_" + suite + ".json");
      report.write_csv(cfg.out_dir + "/report_" + suite + ".csv");
      reg.save(reg_path);
    }
    return report.all_pass() ? 0 : 1;
  } catch (const ttfa_error& e) {
    const std::string what = e.what();
    if (what.rfind("unknown suite", 0) == 0 || what.rfind("config", 0) == 0) {
      std::fprintf(stderr, "config error: %s\n", what.c_str());
      return 2;
    }
    std::fprintf(stderr, "error: %s\n", what.c_str());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}

// Save a PhaseField as a 4n-dimensional sampled field (axes: xi then eta).
void save_phase_field(const PhaseField& V, const std::string& path) {
  std::vector<int> npts = V.xi_grid.npts;
  npts.insert(npts.end(), V.eta_grid.npts.begin(), V.eta_grid.npts.end());
  std::vector<double> halfw = V.xi_grid.halfw;
  halfw.insert(halfw.end(), V.eta_grid.halfw.begin(), V.eta_grid.halfw.end());
  SampledField flat(BoxGrid(npts, halfw), V.values);
  save_field(flat, path);
}

int run_transform(const std::string& op, const std::string& in_path, const std::string& out_path,
                  double lambda, int n, double p, double q, const std::vector<double>& vec,
                  int phase_npts, double phase_halfw, const std::string& mode_name) {
  try {
    const SampledField f = load_field(in_path);
    const TwistParameter tw(lambda, n);
    const StftMode mode = mode_name == "direct"       ? StftMode::direct
                          : mode_name == "quadrature" ? StftMode::quadrature
                                                      : StftMode::fast;
    auto need_vec = [&](int dim) {
      if (static_cast<int>(vec.size()) != dim)
        throw ttfa_error("transform: --vec needs " + std::to_string(dim) + " components");
      return Eigen::Map<const VecXd>(vec.data(), dim);
    };
    auto write = [&](const SampledField& out) {
      if (out_path.empty()) throw ttfa_error("transform: --out required");
      save_field(out, out_path);
    };

    if (op == "identity") {
      write(f);
    } else if (op == "fourier") {
      write(fourier_transform(f, -1));
    } else if (op == "fourier-inverse") {
      write(fourier_transform(f, +1));
    } else if (op == "fractional-shift") {
      const VecXd s = need_vec(f.grid.dim());
      write(fractional_shift(f, std::span<const double>(s.data(), s.size())));
    } else if (op == "twisted-translate") {
      write(twisted_translate(tw, need_vec(f.grid.dim()), f));
    } else if (op == "twisted-modulate") {
      write(twisted_modulate(tw, need_vec(f.grid.dim()), f));
    } else if (op == "u-lambda") {
      write(u_lambda_apply(tw, f));
    } else if (op == "twisted-convolve") {
      // second operand: canonical heat kernel window
      write(twisted_convolve(tw, f, heat_kernel_field(tw, 0.5, f.grid),
                             mode_name == "direct" ? ConvMode::direct : ConvMode::fast));
    } else if (op == "twisted-stft") {
      const Window g = Window::heat_half(tw, f.grid);
      const BoxGrid ph = BoxGrid::cube(f.grid.dim(), phase_npts, phase_halfw);
      const PhaseField V = twisted_stft(tw, f, g, ph, ph, mode);
      if (out_path.empty()) throw ttfa_error("transform: --out required");
      save_phase_field(V, out_path);
    } else if (op == "bargmann") {
      const BoxGrid ph = BoxGrid::cube(f.grid.dim(), phase_npts, phase_halfw);
      const FockField F = bargmann_transform(tw, f, ph, ph);
      PhaseField V(ph, ph);
      V.values = F.values;
      if (out_path.empty()) throw ttfa_error("transform: --out required");
      save_phase_field(V, out_path);
    } else if (op == "m-lambda-norm") {
      const Window g = Window::heat_half(tw, f.grid);
      const BoxGrid ph = BoxGrid::cube(f.grid.dim(), phase_npts, phase_halfw);
      const double norm = m_lambda_norm(tw, f, g, {p, q}, ph, ph, mode);
      nlohmann::json j{{"op", op}, {"lambda", lambda}, {"p", p}, {"q", q}, {"norm", norm}};
      std::printf("%s\n", j.dump().c_str());
    } else if (op == "l2-norm") {
      nlohmann::json j{{"op", op}, {"norm", l2_norm(f)}};
      std::printf("%s\n", j.dump().c_str());
    } else if (op == "quadrature") {
      const cplx v = quadrature_integral(f);
      nlohmann::json j{{"op", op}, {"re", v.real()}, {"im", v.imag()}};
      std::printf("%s\n", j.dump().c_str());
    } else {
      std::fprintf(stderr, "config error: unknown op %s\n", op.c_str());
      return 2;
    }
    return 0;
  } catch (const ttfa_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twisted time-frequency analysis verification harness"};
  app.require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand("verify", "run an identity/inequality suite");
  std::string suite;
  std::string config_path, out_dir;
  std::vector<double> lambdas;
  std::vector<std::string> pqs;
  verify->add_option("suite", suite,
                     "constants | twisted-core | fock | modspace-twisted | heisenberg | all")
      ->required();
  verify->add_option("--config", config_path, "JSON config file");
  verify->add_option("--lambda", lambdas, "lambda sweep values");
  verify->add_option("--pq", pqs, "p,q pairs (e.g. 2,2)");
  verify->add_option("--out", out_dir, "output directory for JSON/CSV reports");

  // transform
  auto* transform = app.add_subcommand("transform", "apply a named operation to a field file");
  std::string op, in_path, out_path, mode_name = "fast";
  double lambda = 1.0, p = 2.0, q = 2.0, phase_halfw = 4.0;
  int n = 1, phase_npts = 24;
  std::vector<double> vec;
  transform->add_option("op", op, "operation name")->required();
  transform->add_option("--in", in_path, "input field manifest")->required();
  transform->add_option("--out", out_path, "output field manifest");
  transform->add_option("--lambda", lambda, "twist parameter");
  transform->add_option("--n", n, "half-dimension");
  transform->add_option("--p", p, "mixed-norm p");
  transform->add_option("--q", q, "mixed-norm q");
  transform->add_option("--vec", vec, "shift/modulation vector components");
  transform->add_option("--phase-npts", phase_npts, "phase lattice points per axis");
  transform->add_option("--phase-halfw", phase_halfw, "phase lattice half width");
  transform->add_option("--mode", mode_name, "direct | quadrature | fast");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (verify->parsed()) return run_verify(suite, config_path, lambdas, pqs, out_dir);
  if (transform->parsed())
    return run_transform(op, in_path, out_path, lambda, n, p, q, vec, phase_npts, phase_halfw,
                         mode_name);
  return 2;
}
