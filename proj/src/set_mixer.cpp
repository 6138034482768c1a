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

#include "cqed/set_mixer.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>

namespace cqed::set_mixer {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_tone(const VoltageTone& tone) {
    if (tone.omega <= 0.0) {
        throw std::invalid_argument("VoltageTone: omega must be > 0");
    }
}

void warn_large_amplitude_once(double z) {
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true)) {
        std::cerr << "sideband_current: c_g * amplitude = " << z
                  << " exceeds 0.1; first-order Bessel truncation degrades\n";
    }
}

} // namespace

SetDevice make_device(double i0, double delta_i0, double c_g, OperatingPoint point,
                      double v_dc_hint) {
    if (delta_i0 <= 0.0) {
        throw std::invalid_argument("SetDevice: modulation depth must be > 0");
    }
    if (c_g <= 0.0) {
        throw std::invalid_argument("SetDevice: gate coupling must be > 0");
    }
    // Snap the bias to the nearest solution of cos(c_g V) = 1 (point A) or
    // sin(c_g V) = 1 (point B).
    const double target = (point == OperatingPoint::Extremum) ? 0.0 : 0.5 * std::numbers::pi;
    const double turns = std::round((c_g * v_dc_hint - target) / kTwoPi);
    const double v_dc = (target + kTwoPi * turns) / c_g;
    return SetDevice{i0, delta_i0, c_g, v_dc, point};
}

double exact_current(const SetDevice& dev, std::span<const VoltageTone> tones, double t) {
    double gate = dev.dc_bias;
    for (const auto& tone : tones) {
        check_tone(tone);
        const double phase = tone.omega * t + tone.phi;
        gate += tone.x * std::cos(phase) + tone.y * std::sin(phase);
    }
    return dev.baseline_current + dev.modulation_depth * std::cos(dev.gate_coupling * gate);
}

double sideband_current(const SetDevice& dev, const VoltageTone& signal, const VoltageTone& lo,
                        double t) {
    if (dev.operating_point != OperatingPoint::Extremum) {
        throw std::invalid_argument("sideband_current: approximation is derived at point A only");
    }
    check_tone(signal);
    check_tone(lo);
    const double cg = dev.gate_coupling;
    const double z = cg * std::max({std::abs(signal.x), std::abs(signal.y), std::abs(lo.x),
                                    std::abs(lo.y)});
    if (z > 0.1) {
        warn_large_amplitude_once(z);
    }

    const double arg = (signal.omega - lo.omega) * t - (lo.phi - signal.phi);
    const double c = std::cos(arg);
    const double s = std::sin(arg);
    const double bracket = signal.x * lo.x * c - signal.x * lo.y * s + signal.y * lo.x * s +
                           signal.y * lo.y * c;
    return dev.static_current() - 0.5 * dev.modulation_depth * cg * cg * bracket;
}

double dual_gate_delta_current(const SetDevice& dev, double x_s, double y_s, double x_lo,
                               double y_lo, double phi) {
    if (dev.operating_point != OperatingPoint::Extremum) {
        throw std::invalid_argument("dual_gate_delta_current: requires point A");
    }
    const double cg = dev.gate_coupling;
    const double bracket = (x_s * x_lo + y_s * y_lo) * std::cos(phi) +
                           (x_s * y_lo - y_s * x_lo) * std::sin(phi);
    return -0.5 * dev.modulation_depth * cg * cg * bracket;
}

Quadratures demodulate(std::span<const double> samples, double dt, double omega_if, double phi,
                       int periods) {
    if (omega_if <= 0.0 || dt <= 0.0) {
        throw std::invalid_argument("demodulate: omega_if and dt must be > 0");
    }
    if (periods < 1) {
        throw std::invalid_argument("demodulate: at least one period required");
    }
    if (samples.size() < 2) {
        throw std::invalid_argument("demodulate: too few samples");
    }
    const double window = dt * static_cast<double>(samples.size() - 1);
    const double expected = periods * kTwoPi / omega_if;
    if (std::abs(window - expected) > 1e-9 * expected) {
        throw std::invalid_argument("demodulate: window does not span an integer period count");
    }
    const double samples_per_period = kTwoPi / (omega_if * dt);
    if (samples_per_period < 8.0) {
        throw std::invalid_argument("demodulate: undersampled (need >= 8 samples per period)");
    }

    double acc_x = 0.0;
    double acc_y = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double weight = (k == 0 || k + 1 == samples.size()) ? 0.5 : 1.0;
        const double arg = omega_if * (dt * static_cast<double>(k)) - phi;
        acc_x += weight * samples[k] * std::cos(arg);
        acc_y += weight * samples[k] * std::sin(arg);
    }
    const double scale = 2.0 * dt / window;
    return Quadratures{scale * acc_x, scale * acc_y};
}

} // namespace cqed::set_mixer
