#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kgeval::cli {

/// Runs one `kgeval` invocation. Exit codes: 0 ok, 2 usage, 3 parse,
/// 4 dimension/consistency, 5 numeric failure, 6 I/O or missing artifact.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kgeval::cli
