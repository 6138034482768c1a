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

#include "cqed/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cqed::report {

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("atomic_write: cannot open " + tmp.string());
        }
        out << content;
        if (!out.good()) {
            throw std::runtime_error("atomic_write: write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string summary_csv(const feedback::EnsembleSummary& summary) {
    std::ostringstream out;
    out << "t,mean_concurrence,se_concurrence,mean_fidelity,se_fidelity\n";
    for (std::size_t s = 0; s < summary.times.size(); ++s) {
        out << format_double(summary.times[s]) << ','
            << format_double(summary.mean_concurrence[s]) << ','
            << format_double(summary.se_concurrence[s]) << ','
            << format_double(summary.mean_fidelity[s]) << ','
            << format_double(summary.se_fidelity[s]) << '\n';
    }
    return out.str();
}

std::string trajectory_csv(const stochastic::TrajectoryRecord& record) {
    std::ostringstream out;
    out << "t,jz,x_quad,n_photon,concurrence,fidelity,dI_smoothed\n";
    for (std::size_t s = 0; s < record.times.size(); ++s) {
        out << format_double(record.times[s]) << ',' << format_double(record.jz[s]) << ','
            << format_double(record.x_quad[s]) << ',' << format_double(record.n_photon[s]) << ','
            << format_double(record.concurrence[s]) << ',' << format_double(record.fidelity[s])
            << ',' << format_double(record.smoothed_signal[s]) << '\n';
    }
    return out.str();
}

namespace {

std::string tick_label(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.3g", value);
    return buffer;
}

} // namespace

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, std::span<const double> xs,
                           std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw std::invalid_argument("svg_line_chart: need matching series with >= 2 points");
    }
    const int width = 800;
    const int height = 500;
    const int left = 70;
    const int right = 20;
    const int top = 40;
    const int bottom = 55;

    const double x_min = *std::min_element(xs.begin(), xs.end());
    const double x_max = *std::max_element(xs.begin(), xs.end());
    double y_min = *std::min_element(ys.begin(), ys.end());
    double y_max = *std::max_element(ys.begin(), ys.end());
    if (y_max - y_min < 1e-12) {
        y_max = y_min + 1.0;
    }
    const double x_span = (x_max - x_min) > 0 ? (x_max - x_min) : 1.0;
    const double y_span = y_max - y_min;

    auto px = [&](double x) { return left + (x - x_min) / x_span * (width - left - right); };
    auto py = [&](double y) { return height - bottom - (y - y_min) / y_span * (height - top - bottom); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
        << "font-family=\"sans-serif\">" << title << "</text>\n";

    // Axes.
    out << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right
        << "\" y2=\"" << height - bottom << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << height - bottom << "\" stroke=\"black\"/>\n";

    const int ticks = 5;
    for (int k = 0; k <= ticks; ++k) {
        const double xv = x_min + x_span * k / ticks;
        const double yv = y_min + y_span * k / ticks;
        out << "<line x1=\"" << px(xv) << "\" y1=\"" << height - bottom << "\" x2=\"" << px(xv)
            << "\" y2=\"" << height - bottom + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << px(xv) << "\" y=\"" << height - bottom + 20
            << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">"
            << tick_label(xv) << "</text>\n";
        out << "<line x1=\"" << left - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << left
            << "\" y2=\"" << py(yv) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << left - 9 << "\" y=\"" << py(yv) + 4
            << "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\">"
            << tick_label(yv) << "</text>\n";
    }
    out << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-size=\"14\" font-family=\"sans-serif\">" << x_label
        << "</text>\n";
    out << "<text x=\"18\" y=\"" << (top + height - bottom) / 2
        << "\" text-anchor=\"middle\" font-size=\"14\" font-family=\"sans-serif\" "
        << "transform=\"rotate(-90 18 " << (top + height - bottom) / 2 << ")\">" << y_label
        << "</text>\n";

    out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < xs.size(); ++k) {
        out << px(xs[k]) << ',' << py(ys[k]) << ' ';
    }
    out << "\"/>\n</svg>\n";
    return out.str();
}

} // namespace cqed::report
