// Copyright (C) 2026 The RTPrune Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <string>

#include "rtprune/error.hpp"
#include "rtprune/simd/kernels.hpp"

namespace rtprune::simd {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* table_for(Isa isa) {
    switch (isa) {
    case Isa::Scalar:
        return &detail::scalar_table();
    case Isa::Avx2:
        return cpu_has_avx2() ? detail::avx2_table() : nullptr;
    case Isa::Neon:
        // Advanced SIMD is mandatory on AArch64.
        return detail::neon_table();
    }
    return nullptr;
}

const KernelTable& select_active() {
    if (const char* forced = std::getenv("RTPRUNE_SIMD"); forced != nullptr) {
        const std::string choice(forced);
        for (const Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
            if (choice == name(isa)) {
                const KernelTable* table = table_for(isa);
                return table != nullptr ? *table : detail::scalar_table();
            }
        }
    }
    for (const Isa isa : {Isa::Avx2, Isa::Neon}) {
        if (const KernelTable* table = table_for(isa)) {
            return *table;
        }
    }
    return detail::scalar_table();
}

}  // namespace

std::string_view name(Isa isa) {
    switch (isa) {
    case Isa::Scalar:
        return "scalar";
    case Isa::Avx2:
        return "avx2";
    case Isa::Neon:
        return "neon";
    }
    return "unknown";
}

bool supported(Isa isa) {
    return table_for(isa) != nullptr;
}

std::vector<Isa> supported_isas() {
    std::vector<Isa> out;
    for (const Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
        if (supported(isa)) {
            out.push_back(isa);
        }
    }
    return out;
}

const KernelTable& kernels(Isa isa) {
    const KernelTable* table = table_for(isa);
    check(table != nullptr, ErrorCode::InvalidInput, "SIMD variant not supported on this host: " + std::string(name(isa)));
    return *table;
}

const KernelTable& kernels() {
    static const KernelTable& active = select_active();
    return active;
}

}  // namespace rtprune::simd
