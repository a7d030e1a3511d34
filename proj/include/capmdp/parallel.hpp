#pragma once

// Worker-count control. Every parallel loop in the library writes only to its
// own output slot and reduces afterwards in index order, so results never
// depend on the number of workers.

namespace capmdp {

/// Caps the number of workers used by parallel loops (<= 0 restores the default).
void set_thread_count(int threads);
int thread_count();

} // namespace capmdp
