// suites.hpp - named verification suites over the library's identities.
#pragma once

#include "ttfa/fixtures.hpp"
#include "ttfa/registry.hpp"
#include "ttfa/report.hpp"

namespace ttfa {

struct SuiteConfig {
  int n = 1;
  int base_npts = 48;
  double base_halfw = 10.0;
  int t_npts = 64;
  double t_halfw = 16.0;
  int phase_npts = 24;
  double phase_halfw = 4.0;
  std::vector<double> lambda_list{0.5, 1.0, 2.0};
  std::vector<MixedNormSpec> pq_list{{2.0, 2.0}, {1.0, 1.0}, {2.0, 4.0}};
  double tol_scale = 1.0;
  std::uint64_t seed = 20240801u;
  std::string out_dir;
  std::string registry_path;

  void validate() const;  // throws naming the offending field
  static SuiteConfig from_json_file(const std::string& path);

  BoxGrid base_grid() const { return BoxGrid::cube(2 * n, base_npts, base_halfw); }
  BoxGrid t_grid() const { return BoxGrid::cube(1, t_npts, t_halfw); }
  BoxGrid phase_grid() const { return BoxGrid::cube(2 * n, phase_npts, phase_halfw); }
};

// suite in {constants, twisted-core, fock, modspace-twisted, heisenberg, all}.
SuiteReport run_suite(const SuiteConfig& cfg, const std::string& suite, ConstantsRegistry& reg);

}  // namespace ttfa
