#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ratioref::cli {

/// Exit codes: 0 success, 1 usage/domain/validation error (JSON error on
/// `err`), 2 verification failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ratioref::cli
