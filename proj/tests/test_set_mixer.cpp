#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <vector>

#include "cqed/set_mixer.hpp"

using namespace cqed::set_mixer;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Samples the exact current over `periods` of omega_if on n+1 points.
std::vector<double> sample_exact(const SetDevice& dev, const std::vector<VoltageTone>& tones,
                                 double omega_if, int periods, int n, double* dt_out) {
    const double window = periods * kTwoPi / omega_if;
    const double dt = window / n;
    std::vector<double> samples(n + 1);
    for (int k = 0; k <= n; ++k) {
        samples[k] = exact_current(dev, tones, dt * k);
    }
    *dt_out = dt;
    return samples;
}

} // namespace

TEST_CASE("exact current static values") {
    const SetDevice dev = make_device(2.0, 0.5, 1.0, OperatingPoint::Extremum);
    // No tones at point A: I0 + dI0.
    CHECK(exact_current(dev, {}, 0.0) == doctest::Approx(2.5).epsilon(1e-15));

    // Single tone with c_g x = pi at the instant cos(omega t) = 1: I0 - dI0.
    const VoltageTone tone{std::numbers::pi, 0.0, 3.0, 0.0};
    std::vector<VoltageTone> tones{tone};
    CHECK(exact_current(dev, tones, 0.0) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("operating point bias snapping") {
    const SetDevice a = make_device(0.0, 1.0, 2.0, OperatingPoint::Extremum, 9.0);
    CHECK(std::cos(a.gate_coupling * a.dc_bias) == doctest::Approx(1.0).epsilon(1e-12));
    const SetDevice b = make_device(0.0, 1.0, 2.0, OperatingPoint::MaxSlope, 9.0);
    CHECK(std::sin(b.gate_coupling * b.dc_bias) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(make_device(0.0, 0.0, 1.0, OperatingPoint::Extremum), std::invalid_argument);
    CHECK_THROWS_AS(make_device(0.0, 1.0, -1.0, OperatingPoint::Extremum), std::invalid_argument);
}

TEST_CASE("sideband current closed form") {
    const SetDevice dev = make_device(10.0, 2.0, 1.0, OperatingPoint::Extremum);
    const VoltageTone sig{0.0, 0.0, kTwoPi * 5.0, 0.0};
    const VoltageTone lo{0.01, 0.02, kTwoPi * 4.0, 0.0};

    // No signal quadratures: constant I0~.
    for (double t : {0.0, 0.13, 0.77}) {
        CHECK(sideband_current(dev, sig, lo, t) == doctest::Approx(12.0).epsilon(1e-15));
    }

    // X1 = X2 = v, Y = 0, phi = 0, t = 0: I0~ - (dI0 c_g^2/2) v^2.
    const double v = 0.01;
    const VoltageTone s2{v, 0.0, kTwoPi * 5.0, 0.0};
    const VoltageTone l2{v, 0.0, kTwoPi * 4.0, 0.0};
    CHECK(sideband_current(dev, s2, l2, 0.0) ==
          doctest::Approx(12.0 - 0.5 * 2.0 * v * v).epsilon(1e-12));

    const SetDevice point_b = make_device(10.0, 2.0, 1.0, OperatingPoint::MaxSlope);
    CHECK_THROWS_AS(sideband_current(point_b, s2, l2, 0.0), std::invalid_argument);
}

TEST_CASE("demodulate pure tone and dc") {
    const double omega = kTwoPi * 3.0;
    const int n = 3000;
    double dt = 0.0;
    {
        // A cos(omega t) -> (A, 0).
        const double window = 2.0 * kTwoPi / omega;
        dt = window / n;
        std::vector<double> samples(n + 1);
        for (int k = 0; k <= n; ++k) {
            samples[k] = 1.7 * std::cos(omega * dt * k);
        }
        const Quadratures q = demodulate(samples, dt, omega, 0.0, 2);
        CHECK(std::abs(q.x - 1.7) <= 1e-6);
        CHECK(std::abs(q.y) <= 1e-6);
    }
    {
        std::vector<double> dc(n + 1, 4.2);
        const Quadratures q = demodulate(dc, dt, omega, 0.0, 2);
        CHECK(std::abs(q.x) <= 1e-9);
        CHECK(std::abs(q.y) <= 1e-9);
    }

    std::vector<double> bad(100, 0.0);
    CHECK_THROWS_AS(demodulate(bad, 0.001, omega, 0.0, 1), std::invalid_argument);
    // Undersampled: fewer than 8 samples per period.
    std::vector<double> coarse(8, 0.0);
    CHECK_THROWS_AS(demodulate(coarse, kTwoPi / omega / 7.0, omega, 0.0, 1),
                    std::invalid_argument);
}

TEST_CASE("demodulated exact current matches the sideband approximation") {
    const SetDevice dev = make_device(1.0, 2.0, 1.0, OperatingPoint::Extremum);
    const double f1 = 5.0;
    const double f2 = 4.0;
    const double delta = kTwoPi * (f1 - f2);
    const VoltageTone sig{0.01, 0.006, kTwoPi * f1, 0.0};
    const VoltageTone lo{0.008, -0.005, kTwoPi * f2, 0.7};
    const double phi = lo.phi - sig.phi;

    double dt = 0.0;
    const auto samples = sample_exact(dev, {sig, lo}, delta, 1, 16384, &dt);
    const Quadratures exact_q = demodulate(samples, dt, delta, phi, 1);

    // The approximation's quadratures, demodulated through the same pipeline.
    std::vector<double> approx(samples.size());
    for (std::size_t k = 0; k < approx.size(); ++k) {
        approx[k] = sideband_current(dev, sig, lo, dt * k);
    }
    const Quadratures approx_q = demodulate(approx, dt, delta, phi, 1);

    const double err = std::hypot(exact_q.x - approx_q.x, exact_q.y - approx_q.y) /
                       std::hypot(approx_q.x, approx_q.y);
    CHECK(err <= 0.01);
}

TEST_CASE("sideband error scales as amplitude squared") {
    const SetDevice dev = make_device(1.0, 2.0, 1.0, OperatingPoint::Extremum);
    const double f1 = 5.0;
    const double f2 = 4.0;
    const double delta = kTwoPi * (f1 - f2);

    auto relative_error = [&](double scale) {
        const VoltageTone sig{0.01 * scale, 0.006 * scale, kTwoPi * f1, 0.0};
        const VoltageTone lo{0.008 * scale, -0.005 * scale, kTwoPi * f2, 0.7};
        const double phi = lo.phi - sig.phi;
        double dt = 0.0;
        const auto samples = sample_exact(dev, {sig, lo}, delta, 1, 16384, &dt);
        const Quadratures exact_q = demodulate(samples, dt, delta, phi, 1);
        std::vector<double> approx(samples.size());
        for (std::size_t k = 0; k < approx.size(); ++k) {
            approx[k] = sideband_current(dev, sig, lo, dt * k);
        }
        const Quadratures approx_q = demodulate(approx, dt, delta, phi, 1);
        return std::hypot(exact_q.x - approx_q.x, exact_q.y - approx_q.y) /
               std::hypot(approx_q.x, approx_q.y);
    };

    const double e1 = relative_error(1.0);
    const double e10 = relative_error(10.0);
    CHECK(e10 / e1 == doctest::Approx(100.0).epsilon(0.2));
}

TEST_CASE("dual gate quadrature readout") {
    const SetDevice dev = make_device(0.0, 2.0, 1.0, OperatingPoint::Extremum);
    const double k = 0.5 * dev.modulation_depth * dev.gate_coupling * dev.gate_coupling;

    // LO along X, phi = 0: output proportional to X_s only.
    const double x_lo = 0.02;
    CHECK(dual_gate_delta_current(dev, 0.01, 0.007, x_lo, 0.0, 0.0) ==
          doctest::Approx(-k * 0.01 * x_lo).epsilon(1e-12));

    // phi = pi/2 with the same inputs: output proportional to Y_s only.
    CHECK(dual_gate_delta_current(dev, 0.01, 0.007, x_lo, 0.0, std::numbers::pi / 2) ==
          doctest::Approx(k * 0.007 * x_lo).epsilon(1e-12));

    CHECK(dual_gate_delta_current(dev, 0.0, 0.0, x_lo, 0.01, 0.3) == 0.0);

    const SetDevice point_b = make_device(0.0, 2.0, 1.0, OperatingPoint::MaxSlope);
    CHECK_THROWS_AS(dual_gate_delta_current(point_b, 1, 0, 1, 0, 0.0), std::invalid_argument);
}

TEST_CASE("dual gate agrees with the degenerate sideband current") {
    const SetDevice dev = make_device(1.0, 2.0, 1.0, OperatingPoint::Extremum);
    const double omega = kTwoPi * 5.0;
    for (double phi : {0.0, 0.4, std::numbers::pi / 2}) {
        const VoltageTone sig{0.01, 0.006, omega, 0.0};
        const VoltageTone lo{0.008, -0.005, omega, phi};
        const double delta_i =
            dual_gate_delta_current(dev, sig.x, sig.y, lo.x, lo.y, phi);
        CHECK(sideband_current(dev, sig, lo, 0.33) ==
              doctest::Approx(dev.static_current() + delta_i).epsilon(1e-12));
    }
}

TEST_CASE("single-tone parity: no odd harmonics at point A") {
    const SetDevice dev = make_device(1.0, 2.0, 1.0, OperatingPoint::Extremum);
    const double omega = kTwoPi * 3.0;
    const VoltageTone tone{0.4, 0.3, omega, 0.2};

    const int n = 8192;
    const double window = kTwoPi / omega;
    const double dt = window / n;
    std::vector<double> samples(n + 1);
    std::vector<VoltageTone> tones{tone};
    for (int k = 0; k <= n; ++k) {
        samples[k] = exact_current(dev, tones, dt * k);
    }
    const Quadratures odd = demodulate(samples, dt, omega, 0.0, 1);
    const Quadratures even = demodulate(samples, dt, 2.0 * omega, 0.0, 2);
    const double odd_amp = std::hypot(odd.x, odd.y);
    const double even_amp = std::hypot(even.x, even.y);
    CHECK(even_amp > 1e-3);
    CHECK(odd_amp <= 1e-10 * even_amp);
}
