#pragma once

namespace splashwave {

/// Applies the SPLASHWAVE_THREADS cap (if set and positive) to the OpenMP
/// runtime. Called once at program start by the CLI and test mains.
void configure_threads_from_env();

/// Number of threads parallel regions will use (1 when built without OpenMP).
int active_thread_count();

void set_thread_count(int n);

}  // namespace splashwave
