#include "acpd/threads.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>

namespace acpd {

int configured_thread_count() {
    const char* env = std::getenv("ACPD_THREADS");
    if (env == nullptr) return 1;
    int requested = 1;
    try {
        requested = std::stoi(env);
    } catch (const std::exception&) {
        return 1;
    }
    const int hardware = std::max(1u, std::thread::hardware_concurrency());
    return std::clamp(requested, 1, hardware);
}

}  // namespace acpd
