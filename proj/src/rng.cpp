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

#include "cqed/rng.hpp"

#include <cmath>
#include <numbers>

namespace cqed::rng {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

CounterRng::CounterRng(std::uint64_t master_seed, std::uint64_t stream_id, std::uint64_t salt) {
    // Hash the triple into the counter base so distinct streams never share
    // counter ranges.
    state_ = mix(master_seed + kGolden);
    state_ = mix(state_ ^ (stream_id + kGolden));
    state_ = mix(state_ ^ (salt + kGolden));
}

std::uint64_t CounterRng::next_u64() {
    state_ += kGolden;
    return mix(state_);
}

double CounterRng::next_uniform() {
    // 53 random bits mapped to (0, 1]; never returns 0 so log() is safe.
    const std::uint64_t bits = next_u64() >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

double CounterRng::next_normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_normal_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

WienerStream::WienerStream(std::uint64_t master_seed, std::uint64_t stream_id, double dt,
                           std::uint64_t salt)
    : rng_(master_seed, stream_id, salt), dt_(dt), sqrt_dt_(std::sqrt(dt)) {}

BridgedWienerStream::BridgedWienerStream(std::uint64_t master_seed, std::uint64_t stream_id,
                                         double coarse_dt)
    : coarse_(master_seed, stream_id, coarse_dt),
      bridge_(master_seed, stream_id, /*salt=*/1),
      coarse_dt_(coarse_dt) {}

double BridgedWienerStream::next() {
    if (has_pending_) {
        has_pending_ = false;
        return pending_;
    }
    const double coarse_increment = coarse_.next();
    const double z = bridge_.next_normal();
    const double first = 0.5 * coarse_increment + 0.5 * std::sqrt(coarse_dt_) * z;
    pending_ = coarse_increment - first;
    has_pending_ = true;
    return first;
}

} // namespace cqed::rng
