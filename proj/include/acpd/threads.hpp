#pragma once

namespace acpd {

/// Intra-case worker count from the ACPD_THREADS environment variable.
/// Defaults to 1 (fully sequential); clamped to the hardware concurrency.
/// Results are required to be bitwise-independent of this value.
int configured_thread_count();

}  // namespace acpd
