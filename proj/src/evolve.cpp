// Copyright 2026 The qmpemba Authors
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

#include "qmpemba/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qmpemba {

namespace {

double snap_tolerance(double horizon) { return 1e-9 * std::max(1.0, horizon); }

Vector spectral_weights(const Spectrum& spectrum, const Vector& coefficients, double t) {
    Vector w(coefficients.size());
    const auto& values = spectrum.eigenvalues();
    for (Index j = 0; j < coefficients.size(); ++j) {
        w(j) = std::exp(values[static_cast<std::size_t>(j)] * t) * coefficients(j);
    }
    return w;
}

} // namespace

Matrix expm_action_spectral(const Spectrum& spectrum, double t, const Matrix& rho) {
    if (!std::isfinite(t)) throw InvalidArgument("propagation time must be finite");
    const Vector alpha = spectrum.coefficients(rho);
    return hermitize(spectrum.reconstruct(spectral_weights(spectrum, alpha, t)));
}

const char* to_string(SegmentRole role) {
    switch (role) {
    case SegmentRole::pre: return "pre";
    case SegmentRole::quench: return "quench";
    case SegmentRole::post: return "post";
    }
    return "pre";
}

QuenchProtocol::QuenchProtocol(std::vector<Segment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) throw InvalidArgument("protocol needs at least one segment");
    const Index dim = segments_.front().spectrum ? segments_.front().spectrum->dim() : 0;
    starts_.reserve(segments_.size() + 1);
    starts_.push_back(0.0);
    for (const auto& seg : segments_) {
        if (!seg.spectrum) throw InvalidArgument("protocol segment without a generator");
        if (seg.spectrum->dim() != dim) throw InvalidArgument("protocol segments act on different dimensions");
        if (!(seg.duration >= 0.0) || !std::isfinite(seg.duration)) {
            throw InvalidArgument("segment durations must be finite and >= 0");
        }
        starts_.push_back(starts_.back() + seg.duration);
    }
    if (!(starts_.back() > 0.0)) throw InvalidArgument("protocol total duration must be > 0");
}

QuenchProtocol QuenchProtocol::constant(std::shared_ptr<const Spectrum> generator, double horizon) {
    return QuenchProtocol({Segment{std::move(generator), horizon, SegmentRole::pre}});
}

QuenchProtocol QuenchProtocol::window(std::shared_ptr<const Spectrum> base, std::shared_ptr<const Spectrum> quenched,
                                      double t1, double t2, double horizon) {
    if (!(0.0 <= t1 && t1 <= t2 && t2 <= horizon)) {
        throw InvalidArgument("quench window needs 0 <= t1 <= t2 <= T, got t1=" + std::to_string(t1) +
                              " t2=" + std::to_string(t2) + " T=" + std::to_string(horizon));
    }
    return QuenchProtocol({Segment{base, t1, SegmentRole::pre}, Segment{std::move(quenched), t2 - t1, SegmentRole::quench},
                           Segment{base, horizon - t2, SegmentRole::post}});
}

Matrix Trajectory::evaluate(std::size_t segment, double t) const {
    const auto& spectrum = *protocol_->segments()[segment].spectrum;
    const double local = std::max(0.0, t - protocol_->start(segment));
    return hermitize(spectrum.reconstruct(spectral_weights(spectrum, segment_coefficients_[segment], local)));
}

Matrix Trajectory::state_at(double t) const {
    const double total = protocol_->total_duration();
    const double tol = snap_tolerance(total);
    if (!(t >= -tol && t <= total + tol)) {
        throw InvalidArgument("time " + std::to_string(t) + " outside protocol range [0, " + std::to_string(total) + "]");
    }
    for (std::size_t k = 0; k < protocol_->size(); ++k) {
        if (t <= protocol_->start(k + 1)) return evaluate(k, t);
    }
    return evaluate(protocol_->size() - 1, t);
}

Trajectory propagate(const Matrix& rho0, std::shared_ptr<const QuenchProtocol> protocol,
                     std::span<const double> sample_times) {
    if (!protocol) throw InvalidArgument("propagate needs a protocol");
    const double total = protocol->total_duration();
    const double tol = snap_tolerance(total);
    if (!std::is_sorted(sample_times.begin(), sample_times.end())) {
        throw InvalidArgument("sample times must be sorted ascending");
    }
    for (double t : sample_times) {
        if (!(t >= -tol && t <= total + tol)) {
            throw InvalidArgument("sample time " + std::to_string(t) + " outside [0, " + std::to_string(total) + "]");
        }
    }

    // Boundaries are exact; requested times within tolerance snap onto them.
    std::vector<double> boundaries;
    for (std::size_t k = 0; k <= protocol->size(); ++k) boundaries.push_back(protocol->start(k));
    std::vector<double> grid;
    grid.reserve(sample_times.size() + boundaries.size());
    for (double t : sample_times) {
        double snapped = std::clamp(t, 0.0, total);
        for (double b : boundaries) {
            if (std::abs(snapped - b) <= tol) snapped = b;
        }
        grid.push_back(snapped);
    }
    for (std::size_t k = 1; k < protocol->size(); ++k) grid.push_back(protocol->start(k));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    Trajectory traj;
    traj.protocol_ = protocol;
    traj.segment_starts_.reserve(protocol->size());
    traj.segment_coefficients_.reserve(protocol->size());
    Matrix start = rho0;
    for (std::size_t k = 0; k < protocol->size(); ++k) {
        traj.segment_starts_.push_back(start);
        traj.segment_coefficients_.push_back(protocol->segments()[k].spectrum->coefficients(start));
        start = traj.evaluate(k, protocol->start(k + 1));
    }

    for (double t : grid) {
        for (std::size_t k = 0; k < protocol->size(); ++k) {
            if (protocol->start(k) <= t && t <= protocol->start(k + 1)) {
                traj.times_.push_back(t);
                traj.segment_of_.push_back(k);
                traj.states_.push_back(traj.evaluate(k, t));
            }
        }
    }
    return traj;
}

std::vector<double> uniform_grid(double horizon, double dt, std::span<const double> extra) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidArgument("horizon T must be finite and > 0");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step dt must be finite and > 0");
    const double steps = std::floor(horizon / dt + 1e-9);
    if (steps > 1e7) throw InvalidArgument("grid would hold more than 1e7 samples; increase dt");

    const double tol = snap_tolerance(horizon);
    std::vector<double> pinned(extra.begin(), extra.end());
    pinned.push_back(0.0);
    pinned.push_back(horizon);
    for (double p : pinned) {
        if (!(p >= 0.0 && p <= horizon)) throw InvalidArgument("forced grid point outside [0, T]");
    }
    std::vector<double> grid = pinned;
    const auto n = static_cast<long long>(steps);
    for (long long i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) * dt;
        if (t > horizon) break;
        const bool near_pinned = std::any_of(pinned.begin(), pinned.end(), [&](double p) { return std::abs(p - t) <= tol; });
        if (!near_pinned) grid.push_back(t);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

} // namespace qmpemba
