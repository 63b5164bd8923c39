#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace normalign::cli
{

enum ExitCode
{
    ok = 0,
    usage = 1,
    invalid_scenario = 2,
    runtime_failure = 3,
};

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics and errors to `err`.
int run( const std::vector<std::string>& args, std::ostream& out, std::ostream& err );

int run( int argc, const char* const* argv, std::ostream& out, std::ostream& err );

} // namespace normalign::cli
