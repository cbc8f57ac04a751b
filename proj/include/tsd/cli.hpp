#pragma once

namespace tsd {

/// Entry point of the `tsd` binary. Exit status: 0 on success, 1 when a computation
/// fails (or `verify` finds a failing criterion), 2 on a configuration error, in
/// which case nothing is written.
int run_cli(int argc, char** argv);

}  // namespace tsd
