#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "freer/location.hpp"

namespace freer::cli {

// exit codes: 0 success, 1 runtime error, 2 usage error
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Endpoint config: JSON object mapping location names to "host:port".
std::map<Location, std::string> parse_endpoints(const std::string& path);

}  // namespace freer::cli
