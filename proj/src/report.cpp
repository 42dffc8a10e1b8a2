#include "ttfa/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace ttfa {

bool SuiteReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

void SuiteReport::add_relative(const std::string& id, const std::string& paper_ref, double lambda,
                               const std::string& spec, double lhs, double rhs, double tol) {
  CheckRecord r;
  r.id = id;
  r.paper_ref = paper_ref;
  r.lambda = lambda;
  r.spec = spec;
  r.lhs = lhs;
  r.rhs = rhs;
  const double denom = std::max(std::abs(rhs), 1e-300);
  r.ratio = lhs / denom;
  r.tol = tol;
  r.pass = std::abs(lhs - rhs) <= tol * std::max(std::abs(rhs), std::abs(lhs));
  checks.push_back(std::move(r));
}

void SuiteReport::add_inequality(const std::string& id, const std::string& paper_ref,
                                 double lambda, const std::string& spec, double lhs, double rhs,
                                 double slack) {
  CheckRecord r;
  r.id = id;
  r.paper_ref = paper_ref;
  r.lambda = lambda;
  r.spec = spec;
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = rhs != 0.0 ? lhs / rhs : (lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  r.tol = slack;
  r.pass = lhs <= rhs * (1.0 + slack) + 1e-300;
  checks.push_back(std::move(r));
}

void SuiteReport::write_json(const std::string& path, bool with_timestamp) const {
  nlohmann::json j;
  j["suite"] = suite;
  j["pass"] = all_pass();
  if (with_timestamp) {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    j["timestamp_unix"] = std::chrono::duration_cast<std::chrono::seconds>(now).count();
  }
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    j["checks"].push_back({{"id", c.id},
                           {"paper_ref", c.paper_ref},
                           {"lambda", c.lambda},
                           {"spec", c.spec},
                           {"lhs", c.lhs},
                           {"rhs", c.rhs},
                           {"ratio", c.ratio},
                           {"tol", c.tol},
                           {"pass", c.pass}});
  }
  std::ofstream out(path);
  if (!out) throw ttfa_error("report: cannot open " + path);
  out << j.dump(2) << "\n";
}

void SuiteReport::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ttfa_error("report: cannot open " + path);
  out << "id,lambda,spec,lhs,rhs,ratio,tol,pass\n";
  for (const auto& c : checks) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s,%.6g,\"%s\",%.12g,%.12g,%.12g,%.3g,%d\n", c.id.c_str(),
                  c.lambda, c.spec.c_str(), c.lhs, c.rhs, c.ratio, c.tol, c.pass ? 1 : 0);
    out << buf;
  }
}

void SuiteReport::print_summary() const {
  std::size_t npass = 0;
  for (const auto& c : checks) {
    std::printf("[%s] %-38s lambda=%-6g %-14s lhs=%.9g rhs=%.9g tol=%g\n",
                c.pass ? "PASS" : "FAIL", c.id.c_str(), c.lambda, c.spec.c_str(), c.lhs, c.rhs,
                c.tol);
    if (c.pass) ++npass;
  }
  std::printf("suite %s: %zu/%zu checks passed\n", suite.c_str(), npass, checks.size());
}

}  // namespace ttfa
