#pragma once

#include <iosfwd>

namespace radchem
{

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitToleranceFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitIoError = 3;

/// Entry point shared by the executable and the tests. Data products go to
/// files or `out`; diagnostics go to `err`.
int run_cli(int argc, char const* const* argv, std::ostream& out, std::ostream& err);

}  // namespace radchem
