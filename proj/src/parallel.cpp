#include "crabot/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace crabot {

unsigned default_worker_count() {
  if (const char* env = std::getenv("CRABOT_WORKERS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<unsigned>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace crabot
