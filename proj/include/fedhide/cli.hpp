#pragma once

namespace fedhide {

// Entry point of the fedhide executable. Exit codes: 0 success, 1 runtime
// error, 2 configuration or usage error.
int cli_main(int argc, char** argv);

}  // namespace fedhide
