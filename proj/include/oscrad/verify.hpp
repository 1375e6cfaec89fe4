#ifndef OSCRAD_VERIFY_HPP
#define OSCRAD_VERIFY_HPP

#include <string>
#include <vector>

#include "oscrad/model.hpp"
#include "oscrad/resolvent.hpp"

namespace oscrad::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  double gap = 0.0;        // measured figure of merit
  double tolerance = 0.0;  // what it was compared against
  std::string note;
};

struct VerifyOptions {
  int stone_points = 3;       // t values for the closed-form vs Stone comparison
  int wavetoy_systems = 20;   // randomized systems in the wavetoy batch
  unsigned seed = 20240817;
};

// The full oracle suite: resolvent overlaps, dual-path J2, Stone agreement in
// both representations, regularized limits, photon cut consistency, and the
// finite-dimensional quantization batch.
std::vector<CheckResult> run_all(const PhysicalParams& p, const PhotonSpec& photon,
                                 const VerifyOptions& opt = {});

inline bool all_pass(const std::vector<CheckResult>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

}  // namespace oscrad::verify

#endif
