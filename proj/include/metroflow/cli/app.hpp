#pragma once

namespace metroflow::cli {

/// Exit codes: 0 success, 1 usage/config error, 2 data error, 3 numerical failure.
enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_data = 2, exit_numerical = 3 };

/// Entry point of the `metroflow` command line tool.
int run(int argc, char** argv);

} // namespace metroflow::cli
