#pragma once

namespace dlp::cli {

inline constexpr const char* kVersion = "0.1.0";

// Entry point behind the dlp binary. Exit codes: 0 success, 1 usage
// error (JSON diagnostic on stderr), 2 runtime error.
int run(int argc, const char* const* argv);

}  // namespace dlp::cli
