// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace rtprune {

/// Worker cap: set_thread_limit() if called with a nonzero value, else
/// RTPRUNE_THREADS, else the hardware concurrency.
std::size_t thread_limit();

/// Overrides RTPRUNE_THREADS for this process. 0 restores the default.
void set_thread_limit(std::size_t threads);

/// Runs body(begin, end) over static contiguous chunks of [0, count).
/// Bodies must only write to state owned by their own indices; any
/// cross-index reduction belongs to the caller, after the join, in index order.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 16);

}  // namespace rtprune
