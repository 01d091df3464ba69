#ifndef FTB_CORE_LOG_HPP
#define FTB_CORE_LOG_HPP

#include <functional>
#include <string>

namespace ftb {

enum class log_level { debug = 0, info = 1, warn = 2, err = 3 };

using log_sink = std::function<void(log_level, const std::string&)>;

// Sink replaces the default stderr writer; pass nullptr to restore it.
// Used by tests to capture warnings and by the CLI to tag output.
void set_log_sink(log_sink sink);
void set_log_threshold(log_level minimum);

void log_msg(log_level level, const std::string& message);

inline void log_debug(const std::string& m) { log_msg(log_level::debug, m); }
inline void log_info(const std::string& m) { log_msg(log_level::info, m); }
inline void log_warn(const std::string& m) { log_msg(log_level::warn, m); }
inline void log_error(const std::string& m) { log_msg(log_level::err, m); }

}  // namespace ftb

#endif
