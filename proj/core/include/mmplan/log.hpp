#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace mmplan::log {

enum class Level { Debug = 0, Info = 1, Warn = 2 };

// Level comes from the MMWAVE_LOG environment variable (debug|info),
// defaulting to warnings only.
inline Level threshold() {
  static Level lv = [] {
    const char* env = std::getenv("MMWAVE_LOG");
    if (env != nullptr) {
      if (std::strcmp(env, "debug") == 0) return Level::Debug;
      if (std::strcmp(env, "info") == 0) return Level::Info;
    }
    return Level::Warn;
  }();
  return lv;
}

inline void write(Level lv, const std::string& msg) {
  if (lv < threshold()) return;
  const char* tag = lv == Level::Debug ? "debug" : lv == Level::Info ? "info" : "warn";
  std::fprintf(stderr, "[mmplan:%s] %s\n", tag, msg.c_str());
}

inline void debug(const std::string& msg) { write(Level::Debug, msg); }
inline void info(const std::string& msg) { write(Level::Info, msg); }
inline void warn(const std::string& msg) { write(Level::Warn, msg); }

}  // namespace mmplan::log
