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

#include "cqed/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <thread>

namespace cqed::feedback {

using hilbert::LinearOperator;
using hilbert::StateVector;
using stochastic::SdeConfig;
using stochastic::TrajectoryRecord;
using stochastic::TwoQubitCavityModel;

void FeedbackParams::validate() const {
    if (lambda < 0.0) {
        throw std::invalid_argument("FeedbackParams: lambda must be >= 0");
    }
    if (power < 1 || power % 2 == 0) {
        throw std::invalid_argument("FeedbackParams: power must be an odd integer >= 1");
    }
    if (window <= 0.0) {
        throw std::invalid_argument("FeedbackParams: window must be > 0");
    }
    if (gamma < 0.0) {
        throw std::invalid_argument("FeedbackParams: gamma must be >= 0");
    }
}

FilterState::FilterState(const FeedbackParams& params, double dt, double normalization) {
    params.validate();
    if (dt <= 0.0) {
        throw std::invalid_argument("FilterState: dt must be > 0");
    }
    if (normalization <= 0.0) {
        throw std::invalid_argument("FilterState: normalization must be > 0");
    }
    const auto window_steps = static_cast<int>(std::llround(params.window / dt));
    if (window_steps < 1) {
        throw std::invalid_argument("FilterState: window shorter than one step");
    }
    buffer_.assign(static_cast<std::size_t>(window_steps), 0.0);
    decay_ = std::exp(-params.gamma * dt);
    drop_weight_ = std::exp(-params.gamma * dt * static_cast<double>(window_steps));
    normalization_ = normalization;
    clamp_ = params.clamp;
}

double FilterState::update(double dI) {
    const double oldest = buffer_[head_];
    weighted_sum_ = decay_ * weighted_sum_ - drop_weight_ * oldest + dI;
    buffer_[head_] = dI;
    head_ = (head_ + 1) % static_cast<int>(buffer_.size());

    double r = weighted_sum_ / normalization_;
    if (clamp_) {
        r = std::clamp(r, -1.0, 1.0);
    }
    clamped_ = r;
    return clamped_;
}

double resolve_normalization(const FeedbackParams& params, double epsilon, double chi,
                             double kappa, int fock_dim, double dt) {
    params.validate();
    if (kappa <= 0.0) {
        throw std::invalid_argument("resolve_normalization: kappa must be > 0");
    }
    // Open-loop steady-state |<a + a^dag>| for the field pinned at J_z = +-1,
    // from the master-equation oracle on the field alone:
    //   H_m = epsilon (a + a^dag) + 2 chi m a^dag a,  L = sqrt(kappa) a.
    const SparseMatrix a = hilbert::annihilation_matrix(fock_dim);
    const SparseMatrix x = a + SparseMatrix(a.adjoint());
    const SparseMatrix n = hilbert::number_matrix(fock_dim);
    const SparseMatrix collapse = std::sqrt(kappa) * a;

    double x_ss = 0.0;
    for (int m : {-1, 1}) {
        const SparseMatrix h = epsilon * x + (2.0 * chi * m) * n;
        DenseMatrix rho = DenseMatrix::Zero(fock_dim, fock_dim);
        rho(0, 0) = 1.0;
        const double horizon = 30.0 / kappa;
        const double rk_dt = std::min(dt, 0.5 / kappa / 50.0);
        rho = stochastic::lindblad_evolve(h, collapse, std::move(rho), horizon, rk_dt);
        x_ss = std::max(x_ss, std::abs((x * rho).trace().real()));
    }
    if (x_ss <= 0.0) {
        throw std::runtime_error("resolve_normalization: steady-state quadrature vanished");
    }

    const auto window_steps = static_cast<int>(std::llround(params.window / dt));
    double weight_sum = 0.0;
    for (int j = 0; j < window_steps; ++j) {
        weight_sum += std::exp(-params.gamma * dt * static_cast<double>(j));
    }
    return kappa * x_ss * weight_sum * dt;
}

LinearOperator feedback_generator(double r, const FeedbackParams& params,
                                  const LinearOperator& jx) {
    params.validate();
    double conditioned = 1.0;
    for (int k = 0; k < params.power; ++k) {
        conditioned *= r;
    }
    SparseMatrix m = (params.lambda * conditioned) * jx.matrix();
    return LinearOperator(jx.layout(), std::move(m), jx.is_hermitian());
}

FilterController::FilterController(const FeedbackParams& params, double dt, double normalization)
    : params_(params), filter_(params, dt, normalization) {}

double FilterController::coefficient() const {
    if (params_.lambda == 0.0) {
        return 0.0;
    }
    const double r = filter_.value();
    double conditioned = 1.0;
    for (int k = 0; k < params_.power; ++k) {
        conditioned *= r;
    }
    return params_.lambda * conditioned;
}

TrajectoryRecord run_feedback_trajectory(const TwoQubitCavityModel& model,
                                         const StateVector& psi0, const SdeConfig& sde,
                                         const FeedbackParams& fb, std::uint64_t stream_id) {
    fb.validate();
    double normalization = fb.normalization;
    if (normalization <= 0.0) {
        normalization = resolve_normalization(fb, model.epsilon, model.chi, model.kappa,
                                              model.layout.dim(2), sde.dt);
    }
    FilterController controller(fb, sde.dt, normalization);
    return stochastic::run_trajectory(model, psi0, sde, &controller, stream_id);
}

namespace {

int worker_count(int requested) {
    if (const char* env = std::getenv("CQEDSIM_WORKERS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) {
            return parsed;
        }
    }
    if (requested > 0) {
        return requested;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

} // namespace

EnsembleSummary run_ensemble(const TwoQubitCavityModel& model, const StateVector& psi0,
                             const SdeConfig& sde, const FeedbackParams& fb, int n_traj,
                             std::uint64_t master_seed, int workers) {
    if (n_traj < 1) {
        throw std::invalid_argument("run_ensemble: n_traj must be >= 1");
    }
    fb.validate();
    sde.validate();

    double normalization = fb.normalization;
    if (normalization <= 0.0) {
        normalization = resolve_normalization(fb, model.epsilon, model.chi, model.kappa,
                                              model.layout.dim(2), sde.dt);
    }

    SdeConfig config = sde;
    config.seed = master_seed;

    std::vector<std::optional<TrajectoryRecord>> records(n_traj);
    std::vector<std::optional<std::string>> failures(n_traj);

    const int threads = std::min(worker_count(workers), n_traj);
    auto work = [&](int first) {
        for (int idx = first; idx < n_traj; idx += threads) {
            try {
                FilterController controller(fb, config.dt, normalization);
                records[idx] = stochastic::run_trajectory(model, psi0, config, &controller,
                                                          static_cast<std::uint64_t>(idx));
            } catch (const std::exception& e) {
                failures[idx] = e.what();
            }
        }
    };
    if (threads <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back(work, w);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    EnsembleSummary summary;
    summary.master_seed = master_seed;
    summary.n_traj = n_traj;

    std::size_t samples = 0;
    for (int idx = 0; idx < n_traj; ++idx) {
        if (records[idx]) {
            samples = records[idx]->times.size();
            summary.times = records[idx]->times;
            break;
        }
    }
    if (samples == 0) {
        throw std::runtime_error("run_ensemble: every trajectory aborted");
    }

    summary.mean_concurrence.assign(samples, 0.0);
    summary.se_concurrence.assign(samples, 0.0);
    summary.mean_fidelity.assign(samples, 0.0);
    summary.se_fidelity.assign(samples, 0.0);

    // Two passes in fixed index order keep the reduction bytes independent of
    // worker scheduling.
    int completed = 0;
    for (int idx = 0; idx < n_traj; ++idx) {
        if (!records[idx]) {
            summary.aborted.emplace_back(static_cast<std::uint64_t>(idx),
                                         failures[idx].value_or("unknown"));
            continue;
        }
        const TrajectoryRecord& rec = *records[idx];
        ++completed;
        summary.trajectory_streams.push_back(rec.stream_id);
        summary.final_fidelity.push_back(rec.fidelity.back());
        summary.final_concurrence.push_back(rec.concurrence.back());
        summary.max_singlet_population.push_back(rec.max_singlet_population);
        summary.max_top_fock_population.push_back(rec.max_top_fock_population);

        double abs_r = 0.0;
        int tail = 0;
        const double window_start = sde.t_final - fb.window;
        for (std::size_t s = 0; s < rec.times.size(); ++s) {
            if (rec.times[s] >= window_start) {
                abs_r += std::abs(rec.smoothed_signal[s]);
                ++tail;
            }
        }
        summary.final_window_abs_r.push_back(tail > 0 ? abs_r / tail : 0.0);

        for (std::size_t s = 0; s < samples; ++s) {
            summary.mean_concurrence[s] += rec.concurrence[s];
            summary.mean_fidelity[s] += rec.fidelity[s];
        }
    }

    for (std::size_t s = 0; s < samples; ++s) {
        summary.mean_concurrence[s] /= completed;
        summary.mean_fidelity[s] /= completed;
    }
    if (completed > 1) {
        for (int idx = 0; idx < n_traj; ++idx) {
            if (!records[idx]) {
                continue;
            }
            const TrajectoryRecord& rec = *records[idx];
            for (std::size_t s = 0; s < samples; ++s) {
                const double dc = rec.concurrence[s] - summary.mean_concurrence[s];
                const double df = rec.fidelity[s] - summary.mean_fidelity[s];
                summary.se_concurrence[s] += dc * dc;
                summary.se_fidelity[s] += df * df;
            }
        }
        const double scale = 1.0 / (static_cast<double>(completed) - 1.0) /
                             static_cast<double>(completed);
        for (std::size_t s = 0; s < samples; ++s) {
            summary.se_concurrence[s] = std::sqrt(summary.se_concurrence[s] * scale);
            summary.se_fidelity[s] = std::sqrt(summary.se_fidelity[s] * scale);
        }
    }

    summary.convergence_fraction =
        metrics::convergence_fraction(summary.final_fidelity, summary.convergence_threshold);
    return summary;
}

} // namespace cqed::feedback
