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

#ifndef CQED_SET_MIXER_HPP
#define CQED_SET_MIXER_HPP

#include <span>
#include <vector>

namespace cqed::set_mixer {

/// Bias points on the sinusoidal current-voltage curve of a strong-tunneling
/// SET. Extremum (point A): cos(c_g V_dc) = 1. MaxSlope (point B):
/// sin(c_g V_dc) = 1. All sideband approximations are derived at point A.
enum class OperatingPoint { Extremum, MaxSlope };

/// I(V_g) = I0 + dI0 * cos(c_g V_g) with c_g = 2 pi C_g / e.
struct SetDevice {
    double baseline_current = 0.0;  // I0
    double modulation_depth = 1.0;  // dI0 > 0
    double gate_coupling = 1.0;     // c_g > 0 (1/volt)
    double dc_bias = 0.0;           // resolved operating-point bias
    OperatingPoint operating_point = OperatingPoint::Extremum;

    /// Static current I0 + dI0 at point A.
    double static_current() const { return baseline_current + modulation_depth; }
};

/// Builds a device with dc_bias snapped to the operating-point solution
/// nearest v_dc_hint. Throws std::invalid_argument on dI0 <= 0 or c_g <= 0.
SetDevice make_device(double i0, double delta_i0, double c_g, OperatingPoint point,
                      double v_dc_hint = 0.0);

/// Single-frequency gate voltage in quadrature form:
///   V(t) = x cos(omega t + phi) + y sin(omega t + phi).
struct VoltageTone {
    double x = 0.0;
    double y = 0.0;
    double omega = 0.0;  // > 0
    double phi = 0.0;
};

/// Exact source-drain current
///   I0 + dI0 cos(c_g (V_dc + sum_k V_k(t))).
/// Retains every harmonic; this is the reference the sideband approximation
/// is validated against.
double exact_current(const SetDevice& dev, std::span<const VoltageTone> tones, double t);

/// First-order Fourier-Bessel sideband current at Omega1 - Omega2 (point A):
///   I0~ - (dI0 c_g^2 / 2) [ X1 X2 cos(D t - phi) - X1 Y2 sin(D t - phi)
///                         + Y1 X2 sin(D t - phi) + Y1 Y2 cos(D t - phi) ]
/// with I0~ = I0 + dI0, D = Omega1 - Omega2 and phi = lo.phi - signal.phi.
/// Terms at Omega1 + Omega2 and the 2*Omega harmonics are dropped; the exact
/// model keeps them so demodulation can confirm they are filtered out.
///
/// Warns once above c_g * amplitude = 0.1, where the first neglected Bessel
/// term J2(z) ~ z^2/8 reaches 0.125% of J0. Throws at point B: the expansion
/// only holds at the extremum.
double sideband_current(const SetDevice& dev, const VoltageTone& signal,
                        const VoltageTone& lo, double t);

/// Degenerate-mixing current change (omega_LO = omega_r) relative to the
/// static value, as a function of the LO-signal phase:
///   phi = 0    -> -(dI0 c_g^2 / 2)(X_s X_LO + Y_s Y_LO)
///   phi = pi/2 -> +(dI0 c_g^2 / 2)(Y_s X_LO - X_s Y_LO)
/// i.e. the X and Y quadratures of the signal read out against the LO.
double dual_gate_delta_current(const SetDevice& dev, double x_s, double y_s,
                               double x_lo, double y_lo, double phi);

struct Quadratures {
    double x = 0.0;
    double y = 0.0;
};

/// Quadratures of `samples` at omega_if by trapezoidal quadrature:
///   X = (2/T) integral I(t) cos(omega_if t - phi) dt   (sine counterpart Y).
/// The window (n-1)*dt must span exactly `periods` periods of omega_if and
/// hold at least 8 samples per period. samples[k] is taken at t = k*dt.
Quadratures demodulate(std::span<const double> samples, double dt, double omega_if,
                       double phi, int periods);

} // namespace cqed::set_mixer

#endif // CQED_SET_MIXER_HPP
