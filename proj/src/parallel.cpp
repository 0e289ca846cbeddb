// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#include "rtprune/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace rtprune {

namespace {

std::atomic<std::size_t> g_override{0};

std::size_t env_threads() {
    const char* raw = std::getenv("RTPRUNE_THREADS");
    if (raw == nullptr || *raw == '\0') {
        return 0;
    }
    try {
        const long value = std::stol(raw);
        return value > 0 ? static_cast<std::size_t>(value) : 0;
    } catch (const std::exception&) {
        return 0;
    }
}

}  // namespace

std::size_t thread_limit() {
    if (const auto forced = g_override.load(); forced != 0) {
        return forced;
    }
    if (const auto from_env = env_threads(); from_env != 0) {
        return from_env;
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void set_thread_limit(std::size_t threads) {
    g_override.store(threads);
}

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk) {
    if (count == 0) {
        return;
    }
    const std::size_t by_size = (count + std::max<std::size_t>(1, min_chunk) - 1) / std::max<std::size_t>(1, min_chunk);
    const std::size_t workers = std::min(thread_limit(), by_size);
    if (workers <= 1) {
        body(0, count);
        return;
    }

    const std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers - 1);
        for (std::size_t w = 1; w < workers; ++w) {
            const std::size_t begin = std::min(count, w * chunk);
            const std::size_t end = std::min(count, begin + chunk);
            pool.emplace_back([&, w, begin, end] {
                try {
                    body(begin, end);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        try {
            body(0, std::min(count, chunk));
        } catch (...) {
            errors[0] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

}  // namespace rtprune
