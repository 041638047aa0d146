#pragma once

#include <cstddef>
#include <functional>

namespace entropy_lab::numerics {

/// Worker count: `requested` if positive, else ENTROPY_LAB_THREADS, else
/// the hardware concurrency (at least 1).
int resolve_threads(int requested = 0);

/// Runs body(block) for every block in [0, n_blocks) on up to `threads`
/// workers. Blocks are claimed dynamically, so callers must write results
/// into per-block slots and fold them in index order afterwards.
///
/// If any block throws, the remaining unclaimed blocks are skipped and the
/// exception from the lowest-indexed failing block is rethrown.
void parallel_blocks(std::size_t n_blocks, int threads,
                     const std::function<void(std::size_t)>& body);

}  // namespace entropy_lab::numerics
