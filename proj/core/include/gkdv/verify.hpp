#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gkdv {

struct VerifyCheck {
  std::string suite;
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// "operators", "conservation", "strichartz", "kappa" and "all".
const std::vector<std::string>& verify_suites();

/// Runs the invariant checks of one suite. Unknown names raise DomainError.
std::vector<VerifyCheck> run_verify(const std::string& suite, std::uint64_t seed = 20240501);

/// One line per check: suite, name, value, tolerance, PASS/FAIL.
std::string format_verify_table(const std::vector<VerifyCheck>& checks);

}  // namespace gkdv
