#include "core/log.hpp"

#include <cstdio>
#include <mutex>

namespace ftb {

namespace {

std::mutex g_mutex;
log_sink g_sink;
log_level g_threshold = log_level::info;

const char* level_tag(log_level level) {
    switch (level) {
        case log_level::debug: return "debug";
        case log_level::info: return "info";
        case log_level::warn: return "warn";
        case log_level::err: return "error";
    }
    return "?";
}

}  // namespace

void set_log_sink(log_sink sink) {
    std::lock_guard<std::mutex> lock(g_mutex);
    g_sink = std::move(sink);
}

void set_log_threshold(log_level minimum) {
    std::lock_guard<std::mutex> lock(g_mutex);
    g_threshold = minimum;
}

void log_msg(log_level level, const std::string& message) {
    std::lock_guard<std::mutex> lock(g_mutex);
    if (level < g_threshold) {
        return;
    }
    if (g_sink) {
        g_sink(level, message);
        return;
    }
    std::fprintf(stderr, "[ftb %s] %s\n", level_tag(level), message.c_str());
}

}  // namespace ftb
