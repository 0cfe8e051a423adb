#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <utility>

namespace slideopt::bench {

enum class LogLevel { error = 0, info = 1, debug = 2 };

// Level comes from SLIDE_OPT_LOG={error,info,debug}; default error.
inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("SLIDE_OPT_LOG");
    if (env == nullptr) return LogLevel::error;
    if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
    if (std::strcmp(env, "info") == 0) return LogLevel::info;
    return LogLevel::error;
  }();
  return level;
}

template <typename... Args>
void log(LogLevel at, const char* fmt, Args&&... args) {
  if (static_cast<int>(at) > static_cast<int>(log_level())) return;
  const char* tag = at == LogLevel::error ? "error"
                    : at == LogLevel::info ? "info"
                                           : "debug";
  std::fprintf(stderr, "[slideopt %s] ", tag);
  std::fprintf(stderr, fmt, std::forward<Args>(args)...);
  std::fprintf(stderr, "\n");
}

#define SLIDEOPT_INFO(...) ::slideopt::bench::log(::slideopt::bench::LogLevel::info, __VA_ARGS__)
#define SLIDEOPT_DEBUG(...) ::slideopt::bench::log(::slideopt::bench::LogLevel::debug, __VA_ARGS__)
#define SLIDEOPT_ERROR(...) ::slideopt::bench::log(::slideopt::bench::LogLevel::error, __VA_ARGS__)

}  // namespace slideopt::bench
