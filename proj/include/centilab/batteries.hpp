#ifndef CENTILAB_BATTERIES_HPP
#define CENTILAB_BATTERIES_HPP

#include <string>
#include <vector>

namespace centilab {

// Outcome of one verification battery. `notes` carries the first few
// failure descriptions; an empty list with pass=true means every check held.
struct CriterionResult {
  std::string name;
  bool pass = true;
  std::vector<std::string> notes;
};

// Runs the nine property batteries over their fixed scenario suites.
// scale "small" strides the heaviest cross-run loops; "full" visits every
// combination. Both are deterministic.
std::vector<CriterionResult> runVerificationSuite(const std::string& scale = "small");

}  // namespace centilab

#endif
