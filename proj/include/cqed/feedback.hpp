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

#ifndef CQED_FEEDBACK_HPP
#define CQED_FEEDBACK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cqed/stochastic.hpp"

namespace cqed::feedback {

/// Controller parameters. The smoothed record R(t) conditions the feedback
/// Hamiltonian lambda * R^power * J_x. power must be odd so the sign of R
/// survives the conditioning.
struct FeedbackParams {
    double lambda = 100.0;      // feedback strength (>= 0)
    int power = 3;              // odd, >= 1
    double window = 0.2;        // filter window T (> 0)
    double gamma = 0.003;       // filter decay (>= 0)
    double normalization = 0.0; // signal scale N; <= 0 requests the steady-state rule
    bool clamp = true;          // restrict R to [-1, 1]

    void validate() const;
};

/// Exponentially weighted moving window over the homodyne increments:
///   R = (1/N) sum_j exp(-gamma (t - t_j)) dI_j,   t - t_j < T.
/// The window is zero-padded before t = T so feedback ramps in smoothly.
/// Maintained incrementally in O(1) per step from a ring buffer.
class FilterState {
public:
    FilterState(const FeedbackParams& params, double dt, double normalization);

    /// Pushes one increment, returns the updated R.
    double update(double dI);
    double value() const { return clamped_; }
    int window_steps() const { return static_cast<int>(buffer_.size()); }
    double normalization() const { return normalization_; }

private:
    std::vector<double> buffer_; // last T/dt increments, ring order
    int head_ = 0;
    double weighted_sum_ = 0.0;
    double decay_ = 1.0;      // exp(-gamma dt)
    double drop_weight_ = 1.; // exp(-gamma T)
    double normalization_ = 1.0;
    double clamped_ = 0.0;
    bool clamp_ = true;
};

/// The steady-state normalization rule: N = kappa * x_ss * sum_j w_j dt with
/// x_ss the larger open-loop steady-state |<a + a^dag>| over J_z = +-1,
/// obtained from the master-equation oracle on the field alone. Makes
/// |R| ~ 1 exactly when the record indicates a fully shifted cavity.
double resolve_normalization(const FeedbackParams& params, double epsilon, double chi,
                             double kappa, int fock_dim, double dt);

/// lambda * R^power * J_x as an operator, suitable as the feedback term of a
/// single SSE step.
hilbert::LinearOperator feedback_generator(double r, const FeedbackParams& params,
                                           const hilbert::LinearOperator& jx);

/// StepController wiring filter and conditioning together; one instance per
/// trajectory, never shared.
class FilterController : public stochastic::StepController {
public:
    FilterController(const FeedbackParams& params, double dt, double normalization);

    double coefficient() const override;
    void observe(double dI) override { filter_.update(dI); }
    double smoothed() const override { return filter_.value(); }

private:
    FeedbackParams params_;
    FilterState filter_;
};

/// Closed-loop trajectory: each step's increment is filtered and conditions
/// the J_x term of the next step (one-step actuation delay). lambda = 0
/// reproduces the open-loop trajectory bit for bit.
stochastic::TrajectoryRecord run_feedback_trajectory(const stochastic::TwoQubitCavityModel& model,
                                                     const hilbert::StateVector& psi0,
                                                     const stochastic::SdeConfig& sde,
                                                     const FeedbackParams& fb,
                                                     std::uint64_t stream_id = 0);

struct EnsembleSummary {
    std::vector<double> times;
    std::vector<double> mean_concurrence;
    std::vector<double> se_concurrence;
    std::vector<double> mean_fidelity;
    std::vector<double> se_fidelity;
    std::uint64_t master_seed = 0;
    std::vector<std::uint64_t> trajectory_streams; // stream id per trajectory
    std::vector<double> final_fidelity;            // per completed trajectory
    std::vector<double> final_concurrence;
    std::vector<double> max_singlet_population;
    std::vector<double> max_top_fock_population;
    std::vector<double> final_window_abs_r;        // mean |R| over the last window
    double convergence_threshold = 0.99;
    double convergence_fraction = 0.0;
    std::vector<std::pair<std::uint64_t, std::string>> aborted; // stream id, diagnostic
    int n_traj = 0;
};

/// Runs n_traj closed-loop trajectories on worker threads (worker count from
/// the CQEDSIM_WORKERS environment variable, else hardware concurrency, else
/// `workers` when positive). Per-trajectory streams derive from
/// (master_seed, index), and reductions run in index order, so the summary
/// bytes are independent of scheduling. A trajectory abort is recorded with
/// its stream id and the ensemble continues.
EnsembleSummary run_ensemble(const stochastic::TwoQubitCavityModel& model,
                             const hilbert::StateVector& psi0, const stochastic::SdeConfig& sde,
                             const FeedbackParams& fb, int n_traj, std::uint64_t master_seed,
                             int workers = 0);

} // namespace cqed::feedback

#endif // CQED_FEEDBACK_HPP
