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

#ifndef QMPEMBA_EVOLVE_HPP
#define QMPEMBA_EVOLVE_HPP

#include <memory>
#include <span>
#include <vector>

#include "qmpemba/superop.hpp"

namespace qmpemba {

/// sum_j e^{lambda_j t} Tr[l_j^+ rho] r_j, Hermitized.
Matrix expm_action_spectral(const Spectrum& spectrum, double t, const Matrix& rho);

/// Scaling-and-squaring Pade approximant of exp(t L) (Higham 2005, orders 3..13).
/// Throws NumericalError when ||tL||_1 is not finite or would need more than
/// `max_squarings` squarings.
Matrix expm_pade(const Liouvillian& generator, double t, int max_squarings = 60);

/// Same algorithm on an arbitrary square matrix.
Matrix expm_pade(const Matrix& a, int max_squarings = 60);

/// Number of squarings expm_pade performs for ||A||_1.
int pade_squarings(double norm1);

enum class SegmentRole { pre, quench, post };

const char* to_string(SegmentRole role);

struct Segment {
    std::shared_ptr<const Spectrum> spectrum;
    double duration = 0.0;
    SegmentRole role = SegmentRole::pre;
};

/// Piecewise-constant generator schedule.
class QuenchProtocol {
public:
    explicit QuenchProtocol(std::vector<Segment> segments);

    /// One segment of `generator` over [0, horizon].
    static QuenchProtocol constant(std::shared_ptr<const Spectrum> generator, double horizon);

    /// (base, t1), (quenched, t2 - t1), (base, horizon - t2). Requires 0 <= t1 <= t2 <= horizon.
    static QuenchProtocol window(std::shared_ptr<const Spectrum> base, std::shared_ptr<const Spectrum> quenched,
                                 double t1, double t2, double horizon);

    const std::vector<Segment>& segments() const { return segments_; }
    double total_duration() const { return starts_.back(); }
    /// Start time of segment k; start(size()) is the total duration.
    double start(std::size_t k) const { return starts_.at(k); }
    std::size_t size() const { return segments_.size(); }

private:
    std::vector<Segment> segments_;
    std::vector<double> starts_;
};

/// States of one initial condition sampled along a protocol.
///
/// A time that coincides with a segment boundary is sampled once per segment
/// touching it, so samples at t1 and t2 appear twice with different
/// segment labels.
class Trajectory {
public:
    const std::vector<double>& times() const { return times_; }
    const std::vector<Matrix>& states() const { return states_; }
    const std::vector<std::size_t>& segment_of() const { return segment_of_; }
    std::size_t size() const { return times_.size(); }

    const QuenchProtocol& protocol() const { return *protocol_; }
    const Matrix& initial_state() const { return segment_starts_.front(); }

    /// State at any t in [0, T], reusing the per-segment spectra.
    Matrix state_at(double t) const;

private:
    friend Trajectory propagate(const Matrix&, std::shared_ptr<const QuenchProtocol>, std::span<const double>);

    Matrix evaluate(std::size_t segment, double t) const;

    std::shared_ptr<const QuenchProtocol> protocol_;
    std::vector<Matrix> segment_starts_;
    std::vector<Vector> segment_coefficients_;
    std::vector<double> times_;
    std::vector<Matrix> states_;
    std::vector<std::size_t> segment_of_;
};

/// Sample rho(t) on `sample_times` (sorted, inside [0, T]); segment boundaries
/// are added to the grid automatically.
Trajectory propagate(const Matrix& rho0, std::shared_ptr<const QuenchProtocol> protocol,
                     std::span<const double> sample_times);

/// 0, dt, 2 dt, ... up to `horizon`, merged with `extra` and `horizon` itself.
std::vector<double> uniform_grid(double horizon, double dt, std::span<const double> extra = {});

} // namespace qmpemba

#endif
