#pragma once

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace mtskl {

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

// Verbosity comes from the MTSKL_LOG environment variable
// (error|warn|info|debug). Default is warn.
inline LogLevel log_level() {
    static LogLevel lvl = [] {
        const char* env = std::getenv("MTSKL_LOG");
        if (env == nullptr) return LogLevel::warn;
        if (std::strcmp(env, "error") == 0) return LogLevel::error;
        if (std::strcmp(env, "warn") == 0) return LogLevel::warn;
        if (std::strcmp(env, "info") == 0) return LogLevel::info;
        if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
        return LogLevel::warn;
    }();
    return lvl;
}

inline void log_msg(LogLevel lvl, const char* fmt, ...) {
    if (static_cast<int>(lvl) > static_cast<int>(log_level())) return;
    static const char* names[] = {"error", "warn", "info", "debug"};
    std::fprintf(stderr, "[mtskl:%s] ", names[static_cast<int>(lvl)]);
    va_list args;
    va_start(args, fmt);
    std::vfprintf(stderr, fmt, args);
    va_end(args);
    std::fputc('\n', stderr);
}

} // namespace mtskl
