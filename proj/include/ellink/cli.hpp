#pragma once

namespace ellink {

// Entry point behind the `ellink` binary. Exit codes: 0 success, 1 runtime
// failure, 2 usage error.
int main_cli(int argc, const char* const* argv);

}  // namespace ellink
