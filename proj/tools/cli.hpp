#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xpfilter::cli {

// Runs one command line (argv[0] excluded). Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xpfilter::cli
