// Copyright 2026 The qweaver Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QWEAVER_RNG_HPP
#define QWEAVER_RNG_HPP

#include <cstdint>

namespace qweaver {

/// Counter-based random stream. Draw i of stream (seed, key) is a pure function
/// of (seed, key, i), so a run is reproducible from its seed and the order in
/// which operations consume draws. split() derives independent child streams
/// (one per Monte Carlo trial, say) without touching the parent's counter.
class RunRng {
   public:
    explicit RunRng(std::uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

    std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    RunRng split(std::uint64_t child) const {
        RunRng out(0);
        out.key_ = mix(key_ ^ mix(child + 0xbb67ae8584caa73bULL));
        return out;
    }

    std::uint64_t draws() const { return counter_; }

   private:
    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace qweaver

#endif
