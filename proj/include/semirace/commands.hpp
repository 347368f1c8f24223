#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace semirace {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitInternal = 4;

// Environment variable naming the directory for resumable race caches.
inline constexpr const char* kCacheDirEnv = "SEMIRACE_CACHE_DIR";

// Entry point of the `semirace` tool. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace semirace
