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

#ifndef CQED_REPORT_HPP
#define CQED_REPORT_HPP

#include <filesystem>
#include <span>
#include <string>

#include "cqed/feedback.hpp"

namespace cqed::report {

/// Shortest representation that round-trips a double exactly.
std::string format_double(double value);

/// Writes via a temp file in the same directory plus rename, so readers never
/// observe partial output.
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// Columns: t,mean_concurrence,se_concurrence,mean_fidelity,se_fidelity.
std::string summary_csv(const feedback::EnsembleSummary& summary);

/// Columns: t,jz,x_quad,n_photon,concurrence,fidelity,dI_smoothed.
std::string trajectory_csv(const stochastic::TrajectoryRecord& record);

/// Minimal line chart: one polyline, axes, ticks, title.
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, std::span<const double> xs,
                           std::span<const double> ys);

} // namespace cqed::report

#endif // CQED_REPORT_HPP
