#include "doctest.h"

#include <cmath>
#include <random>

#include "oscidos/model.hpp"

using namespace oscidos;
namespace m = oscidos::model;

TEST_CASE("omega_ground closed form") {
    CHECK(m::omega_ground({0.0, 1.0, -1.0}) == doctest::Approx(1.5).epsilon(1e-15));
    // phi -> pi/2 limit is 3/pi
    CHECK(m::omega_ground({m::pi / 2.0 - 1e-9, 1.0, -1.0}) ==
          doctest::Approx(3.0 / m::pi).epsilon(1e-7));
    CHECK(m::omega_ground({0.3, 2.5, -1.0}) ==
          doctest::Approx(2.5 * m::omega_ground({0.3, 1.0, -1.0})).epsilon(1e-15));
}

TEST_CASE("t_phi rho equals beta omega_phi") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> phi_d(0.0, m::pi / 2.0 - 1e-6), rho_d(0.01, 20.0);
    for (int i = 0; i < 200; ++i) {
        const double phi = phi_d(rng), rho = rho_d(rng), eta = 0.5 + rho_d(rng);
        const double beta = 2.0 * m::pi * rho / eta;
        const double omega = m::omega_ground({phi, eta, -1.0});
        CHECK(m::t_phi(phi) * rho == doctest::Approx(beta * omega).epsilon(1e-13));
    }
}

TEST_CASE("omega_ground strictly decreasing in phi") {
    double prev = m::omega_ground({0.0, 1.0, -1.0});
    for (int i = 1; i <= 50; ++i) {
        const double phi = i * (m::pi / 2.0 - 1e-4) / 50.0;
        const double cur = m::omega_ground({phi, 1.0, -1.0});
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("resonance geometry") {
    const m::ModelParams p{0.3, 1.0, -1.0};
    const auto g = m::resonance_geometry(p, 6);
    CHECK(g.widths[0] == doctest::Approx(2.0 * std::sin(0.3)).epsilon(1e-15));
    CHECK(g.centers[1] == doctest::Approx(g.omega_ground + 2.0 * std::cos(0.3)).epsilon(1e-15));
    for (std::size_t j = 0; j < g.j_max(); ++j) {
        // scaling map q_j -> p_j
        const auto expect = g.omega_ground + p.eta / (2.0 * m::pi) * g.reduced_poles[j];
        CHECK(std::abs(g.physical_poles[j] - expect) < 1e-13);
        // gamma_j / j constant, gamma_j = 2 Im(conj(p_j) - omega_phi)
        CHECK(g.widths[j] / double(j + 1) == doctest::Approx(g.widths[0]).epsilon(1e-13));
        CHECK(g.widths[j] ==
              doctest::Approx(2.0 * std::imag(std::conj(g.physical_poles[j]) - g.omega_ground))
                  .epsilon(1e-12));
        if (j > 0)
            CHECK(g.centers[j] - g.centers[j - 1] ==
                  doctest::Approx(p.eta * std::cos(p.phi)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(m::resonance_geometry({0.0, 1.0, -1.0}, 3), std::domain_error);
    CHECK_THROWS_AS(m::resonance_geometry(p, 0), std::domain_error);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(m::validate({-0.1, 1.0, -1.0}), std::domain_error);
    CHECK_THROWS_AS(m::validate({m::pi / 2.0, 1.0, -1.0}), std::domain_error);
    CHECK_THROWS_AS(m::validate({0.1, 0.0, -1.0}), std::domain_error);
    CHECK_NOTHROW(m::validate({0.1, 1.0, 100.0}));
    CHECK(m::ModelParams{0.1, 1.0, -1.0}.cutoff_removed());
    CHECK_FALSE(m::ModelParams{0.1, 1.0, 5.0}.cutoff_removed());
}

TEST_CASE("coupling angle conversion") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> d(0.0, 0.999);
    for (int i = 0; i < 100; ++i) {
        const double s = d(rng);
        CHECK(m::sin_from_phi(m::phi_from_sin(s)) == doctest::Approx(s).epsilon(1e-14));
    }
    CHECK_THROWS_AS(m::phi_from_sin(1.0), std::domain_error);
}
