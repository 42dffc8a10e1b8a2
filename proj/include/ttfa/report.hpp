// report.hpp - machine-readable check records for the verification suites.
#pragma once

#include <string>
#include <vector>

#include "ttfa/common.hpp"

namespace ttfa {

struct CheckRecord {
  std::string id;
  std::string paper_ref;
  double lambda = 0.0;
  std::string spec;  // free-form parameter note, e.g. "p=2,q=2"
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckRecord> checks;

  bool all_pass() const;
  void add(CheckRecord r) { checks.push_back(std::move(r)); }
  // lhs vs rhs with relative tolerance.
  void add_relative(const std::string& id, const std::string& paper_ref, double lambda,
                    const std::string& spec, double lhs, double rhs, double tol);
  // lhs <= rhs * (1 + slack).
  void add_inequality(const std::string& id, const std::string& paper_ref, double lambda,
                      const std::string& spec, double lhs, double rhs, double slack);

  // Deterministic JSON (timestamp excepted) and a CSV summary.
  void write_json(const std::string& path, bool with_timestamp = true) const;
  void write_csv(const std::string& path) const;
  void print_summary() const;
};

}  // namespace ttfa
