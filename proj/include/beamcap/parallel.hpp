#pragma once

#include <functional>

namespace beamcap {

/// Runs fn(shard) for every shard in [0, shards) across a worker pool sized
/// by `jobs` (0 = available parallelism). Work is split by shard index, so
/// results are independent of the worker count; the first exception thrown by
/// any shard is rethrown after all workers join.
void run_sharded(int shards, const std::function<void(int)>& fn, int jobs = 0);

}  // namespace beamcap
