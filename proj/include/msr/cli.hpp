#pragma once

// Command-line surface.  run_cli returns the process exit code:
//   0  success
//   1  infeasible input / failed verification / failed lemma check / timeout
//   2  malformed input (parse or validation errors)

#include <iosfwd>
#include <string>
#include <vector>

namespace msr {

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace msr
