#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bwnim::app {

/// Runs the `bwnim` command line. Exit codes: 0 success, 1 failed check
/// (verify found mismatches), 2 usage error, 3 table too large.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in);

}  // namespace bwnim::app
