// Copyright 2026 The cqedsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CQED_RNG_HPP
#define CQED_RNG_HPP

#include <cstdint>

namespace cqed::rng {

/// Counter-based stream: the SplitMix64 finalizer applied to an arithmetic
/// counter seeded from (master_seed, stream_id, salt). Streams are
/// statistically independent and reproducible regardless of scheduling
/// order, which keeps ensembles deterministic under any worker count.
class CounterRng {
public:
    CounterRng(std::uint64_t master_seed, std::uint64_t stream_id, std::uint64_t salt = 0);

    std::uint64_t next_u64();
    /// Uniform in (0, 1].
    double next_uniform();
    /// Standard normal via Box-Muller; consumes exactly two uniforms per pair.
    double next_normal();

private:
    std::uint64_t state_ = 0;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

/// Gaussian Wiener increments: mean 0, variance dt.
class WienerStream {
public:
    WienerStream(std::uint64_t master_seed, std::uint64_t stream_id, double dt,
                 std::uint64_t salt = 0);

    double next() { return sqrt_dt_ * rng_.next_normal(); }
    double dt() const { return dt_; }

private:
    CounterRng rng_;
    double dt_ = 0.0;
    double sqrt_dt_ = 0.0;
};

/// Wiener increments at dt/2 obtained by midpoint (Brownian bridge)
/// refinement of the parent stream's increments at dt. Consecutive pairs sum
/// to the parent increments, so a halved-step integration sees the same
/// Brownian path as the parent run. Bridge normals come from an independent
/// salted stream.
class BridgedWienerStream {
public:
    BridgedWienerStream(std::uint64_t master_seed, std::uint64_t stream_id, double coarse_dt);

    double next();
    double dt() const { return 0.5 * coarse_dt_; }

private:
    WienerStream coarse_;
    CounterRng bridge_;
    double coarse_dt_ = 0.0;
    double pending_ = 0.0;
    bool has_pending_ = false;
};

} // namespace cqed::rng

#endif // CQED_RNG_HPP
