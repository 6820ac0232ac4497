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


#include <doctest.h>

#include <algorithm>

#include "support.hpp"

using namespace qmpemba;
using qmpemba::testing::max_abs;
using qmpemba::testing::Rng;

namespace {

std::shared_ptr<const QuenchProtocol> share(QuenchProtocol p) { return std::make_shared<const QuenchProtocol>(std::move(p)); }

double min_eigenvalue(const Matrix& rho) {
    const auto ev = testing::hermitian_eigenvalues(rho);
    return *std::min_element(ev.begin(), ev.end());
}

} // namespace

TEST_CASE("spectral propagation limits") {
    const auto& model = testing::preset_model("fig2");
    Rng rng(21);
    const Matrix rho = rng.density(20);
    CHECK(max_abs(expm_action_spectral(*model.base, 0.0, rho) - rho) < 1e-8);
    CHECK(max_abs(expm_action_spectral(*model.base, 1e4, rho) - model.rho_ss) < 1e-8);
    CHECK_THROWS_AS(expm_action_spectral(*model.base, std::nan(""), rho), InvalidArgument);
}

TEST_CASE("two-site dephasing closed form") {
    const LatticeSpec lat{2, 0.0, Boundary::open};
    const BasisSpec basis{SectorKind::single_particle, 2};
    const double gamma = 0.7;
    const auto jumps = build_dephasing(lat, basis, gamma);
    const auto spec = Spectrum::compute(
        std::make_shared<const Liouvillian>(Liouvillian::assemble(build_hamiltonian(lat, basis), jumps)));
    Matrix rho(2, 2);
    rho << 0.5, 0.5, 0.5, 0.5;
    for (double t : {0.0, 0.3, 1.0, 4.0, 12.5}) {
        const Matrix out = expm_action_spectral(*spec, t, rho);
        CHECK(std::abs(out(0, 1) - 0.5 * std::exp(-gamma * t)) < 1e-14);
        CHECK(std::abs(out(0, 0) - 0.5) < 1e-14);
    }
}

TEST_CASE("Pade exponential on matrices with known exponentials") {
    CHECK(max_abs(expm_pade(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)) == 0.0);

    Matrix n = Matrix::Zero(2, 2);
    n(0, 1) = 5.0;
    Matrix expected = Matrix::Identity(2, 2);
    expected(0, 1) = 5.0;
    CHECK(max_abs(expm_pade(n) - expected) < 1e-14);

    for (double theta : {0.1, 1.0, 3.0, 40.0}) {
        Matrix r(2, 2);
        r << 0.0, -theta, theta, 0.0;
        Matrix rot(2, 2);
        rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
        CHECK(max_abs(expm_pade(r) - rot) < 1e-12 * std::max(1.0, theta));
    }

    Rng rng(22);
    for (int trial = 0; trial < 10; ++trial) {
        Vector d(5);
        for (Index i = 0; i < 5; ++i) d(i) = cplx{rng.uniform(-20.0, 2.0), rng.uniform(-5.0, 5.0)};
        const Matrix s = rng.matrix(5);
        const Matrix a = s * d.asDiagonal() * s.inverse();
        Vector ed(5);
        for (Index i = 0; i < 5; ++i) ed(i) = std::exp(d(i));
        const Matrix ref = s * ed.asDiagonal() * s.inverse();
        CHECK(max_abs(expm_pade(a) - ref) < 1e-8 * std::max(1.0, max_abs(ref)));
    }

    CHECK(pade_squarings(0.0) == 0);
    CHECK(pade_squarings(1.0) == 0);
    CHECK(pade_squarings(100.0) > 0);
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(expm_pade(bad), NumericalError);
    CHECK_THROWS_AS(expm_pade(Matrix::Zero(2, 3)), InvalidArgument);
    Matrix huge = Matrix::Identity(2, 2) * 1e30;
    CHECK_THROWS_AS(expm_pade(huge, 10), NumericalError);
}

TEST_CASE("Pade and spectral propagation agree on the presets") {
    Rng rng(23);
    for (const char* name : {"fig2", "fig3-qme"}) {
        const auto& model = testing::preset_model(name);
        const Index d = model.base->dim();
        CHECK(max_abs(expm_pade(model.base->generator(), 0.0) - Matrix::Identity(d * d, d * d)) == 0.0);
        for (int trial = 0; trial < 6; ++trial) {
            const double t = rng.uniform(0.0, std::string(name) == "fig2" ? 300.0 : 20.0);
            const Matrix rho = rng.density(d);
            const Matrix pade = devectorize(expm_pade(model.base->generator(), t) * vectorize(rho));
            CHECK(max_abs(pade - expm_action_spectral(*model.base, t, rho)) < 1e-8);
        }
    }
}

TEST_CASE("uniform mixture is a fixed point of the dephasing propagator") {
    const auto& model = testing::preset_model("fig2");
    const Matrix uniform = Matrix::Identity(20, 20) / 20.0;
    const Vector v = expm_pade(model.base->generator(), 17.0) * vectorize(uniform);
    CHECK((v - vectorize(uniform)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("protocol construction") {
    const auto& model = testing::preset_model("fig3-qme");
    const auto w = QuenchProtocol::window(model.base, model.quenched, 0.5, 3.0, 20.0);
    REQUIRE(w.size() == 3);
    CHECK(w.total_duration() == 20.0);
    CHECK(w.start(1) == 0.5);
    CHECK(w.start(2) == 3.0);
    CHECK(w.segments()[1].role == SegmentRole::quench);
    CHECK(std::string(to_string(SegmentRole::post)) == "post");

    CHECK_THROWS_AS(QuenchProtocol::window(model.base, model.quenched, 3.0, 0.5, 20.0), InvalidArgument);
    CHECK_THROWS_AS(QuenchProtocol::window(model.base, model.quenched, -1.0, 0.5, 20.0), InvalidArgument);
    CHECK_THROWS_AS(QuenchProtocol::window(model.base, model.quenched, 1.0, 25.0, 20.0), InvalidArgument);
    CHECK_THROWS_AS(QuenchProtocol({}), InvalidArgument);
    CHECK_THROWS_AS(QuenchProtocol::constant(model.base, 0.0), InvalidArgument);
    CHECK_THROWS_AS(QuenchProtocol({Segment{nullptr, 1.0, SegmentRole::pre}}), InvalidArgument);
    CHECK_THROWS_AS(QuenchProtocol({Segment{model.base, 1.0, SegmentRole::pre},
                                    Segment{testing::preset_model("fig2").base, 1.0, SegmentRole::post}}),
                    InvalidArgument);
}

TEST_CASE("single-segment trajectory matches direct propagation") {
    const auto& model = testing::preset_model("fig3-qme");
    const Matrix rho0 = site_mixture(model.basis, {{5, 1.0}});
    const auto grid = uniform_grid(20.0, 0.5);
    const auto traj = propagate(rho0, share(QuenchProtocol::constant(model.base, 20.0)), grid);
    REQUIRE(traj.size() == grid.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        CHECK(max_abs(traj.states()[i] - expm_action_spectral(*model.base, traj.times()[i], rho0)) < 1e-12);
    }
    CHECK(max_abs(traj.initial_state() - rho0) == 0.0);
}

TEST_CASE("empty quench window reproduces the unquenched trajectory") {
    const auto& model = testing::preset_model("fig3-qme");
    const Matrix rho0 = site_mixture(model.basis, {{9, 1.0}});
    const auto grid = uniform_grid(20.0, 0.1);
    const auto plain = propagate(rho0, share(QuenchProtocol::constant(model.base, 20.0)), grid);
    const auto empty = propagate(rho0, share(QuenchProtocol::window(model.base, model.quenched, 2.0, 2.0, 20.0)), grid);
    for (double t : {0.0, 1.0, 2.0, 2.05, 7.3, 20.0}) CHECK(max_abs(plain.state_at(t) - empty.state_at(t)) < 1e-10);
}

TEST_CASE("quenched and unquenched trajectories agree up to t1") {
    const auto& model = testing::preset_model("fig2");
    const ExperimentConfig cfg = preset("fig2");
    const Matrix rho0 = site_mixture(model.basis, {{9, 1.0}});
    const double pins[] = {45.0, 65.0};
    const auto grid = uniform_grid(300.0, 1.0, pins);
    const auto base = propagate(rho0, share(QuenchProtocol::window(model.base, model.base, 45.0, 65.0, 300.0)), grid);
    const auto q = propagate(rho0, share(QuenchProtocol::window(model.base, model.quenched, 45.0, 65.0, 300.0)), grid);
    REQUIRE(base.times() == q.times());
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double diff = max_abs(q.states()[i] - base.states()[i]);
        if (q.times()[i] <= 45.0) {
            CHECK(diff < 1e-12);
        } else {
            CHECK(diff > 1e-8);
        }
    }
}

TEST_CASE("segment boundaries are sampled on both sides") {
    const auto& model = testing::preset_model("fig3-anti");
    const Matrix rho0 = site_mixture(model.basis, {{5, 1.0}});
    const std::vector<double> times{0.0, 0.5 + 1e-12, 1.0, 3.0 - 1e-11, 20.0};
    const auto traj = propagate(rho0, share(QuenchProtocol::window(model.base, model.quenched, 0.5, 3.0, 20.0)), times);
    const std::vector<double> expected_t{0.0, 0.5, 0.5, 1.0, 3.0, 3.0, 20.0};
    const std::vector<std::size_t> expected_seg{0, 0, 1, 1, 1, 2, 2};
    CHECK(traj.times() == expected_t);
    CHECK(traj.segment_of() == expected_seg);
    CHECK(max_abs(traj.states()[1] - traj.states()[2]) < 1e-10);
    CHECK(max_abs(traj.states()[4] - traj.states()[5]) < 1e-10);
}

TEST_CASE("propagate rejects bad grids") {
    const auto& model = testing::preset_model("fig3-qme");
    const Matrix rho0 = site_mixture(model.basis, {{5, 1.0}});
    const auto p = share(QuenchProtocol::constant(model.base, 20.0));
    const std::vector<double> unsorted{0.0, 2.0, 1.0};
    const std::vector<double> outside{0.0, 21.0};
    const std::vector<double> negative{-0.5, 1.0};
    CHECK_THROWS_AS(propagate(rho0, p, unsorted), InvalidArgument);
    CHECK_THROWS_AS(propagate(rho0, p, outside), InvalidArgument);
    CHECK_THROWS_AS(propagate(rho0, p, negative), InvalidArgument);
    CHECK_THROWS_AS(propagate(rho0, nullptr, unsorted), InvalidArgument);
    const auto traj = propagate(rho0, p, std::vector<double>{1.0});
    CHECK_THROWS_AS(traj.state_at(25.0), InvalidArgument);
}

TEST_CASE("semigroup property") {
    Rng rng(24);
    for (const char* name : {"fig2", "fig3-qme"}) {
        const auto& model = testing::preset_model(name);
        const Index d = model.base->dim();
        for (int trial = 0; trial < 10; ++trial) {
            const double s = rng.uniform(0.0, 10.0);
            const double t = rng.uniform(0.0, 10.0);
            const Matrix rho0 = rng.density(d);
            const auto split = share(QuenchProtocol(
                {Segment{model.base, s, SegmentRole::pre}, Segment{model.base, t, SegmentRole::post}}));
            const auto whole = share(QuenchProtocol::constant(model.base, s + t));
            const std::vector<double> end{s + t};
            const auto a = propagate(rho0, split, end);
            const auto b = propagate(rho0, whole, end);
            CHECK(max_abs(a.states().back() - b.states().back()) < 1e-9);
            CHECK(max_abs(a.states().back() - expm_action_spectral(*model.base, t, expm_action_spectral(*model.base, s, rho0))) < 1e-9);
        }
    }
}

TEST_CASE("positivity and trace along preset trajectories") {
    for (const char* name : {"fig2", "fig3-qme", "fig3-anti"}) {
        const ExperimentConfig cfg = preset(name);
        const auto& model = testing::preset_model(name);
        const auto sim = simulate(cfg, model);
        const bool lossy = std::string(name) != "fig2";
        for (const auto& run : sim.runs) {
            double previous = 1.0 + 1e-12;
            for (const auto& rho : run.trajectory.states()) {
                CHECK(min_eigenvalue(rho) >= -1e-8);
                CHECK(std::abs(rho.trace() - cplx{1.0}) < 1e-10);
                const double particles = (model.number_op * rho).trace().real();
                if (lossy) {
                    CHECK(particles <= previous + 1e-12);
                    previous = particles;
                } else {
                    CHECK(std::abs(particles - 1.0) < 1e-10);
                }
            }
        }
    }
}

TEST_CASE("uniform grids") {
    const double pins[] = {0.55, 3.0};
    const auto g = uniform_grid(20.0, 0.1, pins);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 20.0);
    CHECK(std::is_sorted(g.begin(), g.end()));
    CHECK(std::find(g.begin(), g.end(), 0.55) != g.end());
    CHECK(std::find(g.begin(), g.end(), 3.0) != g.end());
    CHECK(g.size() == 202);

    const auto h = uniform_grid(1.0, 0.3);
    CHECK(h.back() == 1.0);
    CHECK(h.size() == 5);

    CHECK_THROWS_AS(uniform_grid(0.0, 0.1), InvalidArgument);
    CHECK_THROWS_AS(uniform_grid(1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(uniform_grid(1e9, 1e-3), InvalidArgument);
    const double bad[] = {2.0};
    CHECK_THROWS_AS(uniform_grid(1.0, 0.1, bad), InvalidArgument);
}
