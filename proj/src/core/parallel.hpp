#pragma once

#include <functional>

namespace bass {

// Process-wide default worker count. 0 means "use hardware concurrency".
// The CLI sets this from --threads / BASS_THREADS.
void set_default_threads(int n);
int default_threads();

// Runs fn(0..n-1) on up to `threads` workers (<=0 picks the default).
// Items are independent; callers that reduce results must do so in index
// order after this returns so that scheduling never changes the outcome.
void parallel_for_items(int n, int threads, const std::function<void(int)>& fn);

}  // namespace bass
