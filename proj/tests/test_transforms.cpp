#include "doctest.h"

#include <cmath>
#include <complex>

#include "oscidos/density.hpp"
#include "oscidos/model.hpp"
#include "oscidos/partition.hpp"
#include "oscidos/transforms.hpp"

using namespace oscidos;
namespace tr = oscidos::transforms;
using complex = std::complex<double>;

namespace {
constexpr double pi = 3.14159265358979323846;

tr::SampledMeasure lorentz_fixture(double center, double hw, double halfspan, double dx) {
    tr::SampledMeasure m;
    m.x0 = center - halfspan;
    m.dx = dx;
    const std::size_t n = std::size_t(2.0 * halfspan / dx) + 1;
    m.density.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = m.x0 + i * dx;
        m.density[i] = hw / (pi * ((x - center) * (x - center) + hw * hw));
    }
    return m;
}
}  // namespace

TEST_CASE("laplace transform of sampled measures") {
    tr::SampledMeasure atom;
    atom.atoms = {{0.0, 1.0}};
    for (double rho : {0.3, 1.0, 7.0})
        CHECK(tr::laplace_of_measure(atom, rho) == doctest::Approx(1.0).epsilon(1e-15));

    // against the closed-form partition route: Y(rho) = z_full e^{t_phi rho}
    const model::ModelParams p{0.3, 1.0, -1.0};
    const auto sm = density::rho_density(p, 20.0 * pi, 2.0 * pi / 1024, 40);
    const double lhs = tr::laplace_of_measure(sm, 2.0, 1e-3);
    const double rhs = std::exp(partition::log_z_full(2.0, 0.3) + model::t_phi(0.3) * 2.0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-3));

    // linearity in the density
    auto scaled = tr::reduced_measure(sm);
    for (auto& v : scaled.density) v *= 2.0;
    const double base = tr::laplace_of_measure(tr::reduced_measure(sm), 2.0, 1e-2);
    const double twice = tr::laplace_of_measure(scaled, 2.0, 1e-2);
    CHECK(twice - 1.0 == doctest::Approx(2.0 * (base - 1.0)).epsilon(1e-13));

    // insufficient grid length signalled
    CHECK_THROWS_AS(tr::laplace_of_measure(sm, 0.01, 1e-6), std::runtime_error);
}

TEST_CASE("stieltjes transform basics") {
    tr::SampledMeasure d1;
    d1.atoms = {{1.0, 1.0}};
    const complex v = tr::stieltjes_transform(d1, {0.0, 1.0});
    CHECK(std::abs(v - complex(0.5, 0.5)) < 1e-15);

    tr::SampledMeasure d01;
    d01.atoms = {{0.0, 1.0}, {1.0, 1.0}};
    CHECK(std::abs(tr::stieltjes_transform(d01, {-1.0, 0.0}) - complex(1.5, 0.0)) < 1e-15);

    const auto lor = lorentz_fixture(2.0, 0.1, 1.5, 0.001);
    for (double t : {1.2, 2.0, 2.8}) {
        const complex f = tr::stieltjes_transform(lor, {t, 0.01});
        CHECK(f.imag() > 0.0);  // Herglotz
        CHECK(std::abs(std::conj(tr::stieltjes_transform(lor, {t, -0.01})) - f) < 1e-14);
    }
    CHECK_THROWS_AS(tr::stieltjes_transform(lor, {2.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(tr::stieltjes_transform(d1, {1.0, 0.0}), std::domain_error);
}

TEST_CASE("stieltjes inversion round trips") {
    const std::vector<double> eps{1e-1, 1e-2, 1e-3};

    tr::SampledMeasure d1;
    d1.atoms = {{1.0, 1.0}};
    auto f1 = [&](complex z) { return tr::stieltjes_transform(d1, z); };
    CHECK(std::abs(tr::stieltjes_invert(f1, 0.5, eps, {1e-3})) < 1e-3);
    CHECK(std::abs(tr::stieltjes_invert(f1, 1.5, eps, {1e-3}) - 1.0) < 1e-3);

    // uniform density 0.5 on [0, 2]
    tr::SampledMeasure uni;
    uni.x0 = 0.0;
    uni.dx = 0.001;
    uni.density.assign(2001, 0.5);
    auto f2 = [&](complex z) { return tr::stieltjes_transform(uni, z); };
    CHECK(std::abs(tr::stieltjes_invert(f2, 1.0, eps, {uni.dx}) - 0.5) < 1e-3);

    // density level: (1/pi) Im f(t + i eps) converges uniformly on a compact
    // (Poisson widening shifts the peak by ~eps/(pi hw^2))
    const auto lor = lorentz_fixture(2.0, 0.1, 4.0, 5e-5);
    double prev = 1e9;
    for (double e : {1e-1, 1e-2, 1e-3, 1e-4}) {
        double sup = 0.0;
        for (double t = 1.6; t <= 2.4; t += 0.01) {
            const double approx = tr::stieltjes_transform(lor, {t, e}).imag() / pi;
            const double exact = 0.1 / (pi * ((t - 2.0) * (t - 2.0) + 0.01));
            sup = std::max(sup, std::abs(approx - exact));
        }
        CHECK(sup < prev);
        prev = sup;
    }
    CHECK(prev < 1e-2);
}

TEST_CASE("fourier transform of measures") {
    tr::SampledMeasure d1;
    d1.atoms = {{1.0, 1.0}};
    CHECK(std::abs(tr::fourier_of_measure(d1, 0.7) - std::polar(1.0, -0.7)) < 1e-15);

    const auto lor = lorentz_fixture(2.0, 0.05, 100.0, 0.01);
    CHECK(tr::fourier_of_measure(lor, 0.0).real() ==
          doctest::Approx(lor.total_mass()).epsilon(1e-12));
    for (double t : {0.5, 1.5, 3.0}) {
        const complex expect = std::polar(1.0, -2.0 * t) * std::exp(-0.05 * t);
        CHECK(std::abs(tr::fourier_of_measure(lor, t) - expect) < 1e-3);
        // real measure: conj at -t
        CHECK(std::abs(std::conj(tr::fourier_of_measure(lor, -t)) -
                       tr::fourier_of_measure(lor, t)) < 1e-15);
    }
}

TEST_CASE("stieltjes transform converts to the fourier transform") {
    const std::vector<double> eps{0.1, 0.05, 0.025};

    tr::SampledMeasure d1;
    d1.atoms = {{1.0, 1.0}};
    auto f1 = [&](complex z) { return tr::stieltjes_transform(d1, z); };
    for (double t : {0.0, 0.8, 2.0}) {
        const complex got = tr::stieltjes_to_fourier(f1, t, eps, -80.0, 82.0);
        CHECK(std::abs(got - std::polar(1.0, -t)) < 1e-3);
    }

    // full-line Lorentz through its analytic Stieltjes transform 1/(p - z)
    const complex p(2.0, -0.1);
    auto f2 = [&](complex z) { return 1.0 / (p - z); };
    for (double t : {0.5, 2.0}) {
        const complex expect = std::polar(1.0, -2.0 * t) * std::exp(-0.1 * t);
        CHECK(std::abs(tr::stieltjes_to_fourier(f2, t, eps, -250.0, 254.0) - expect) < 1e-3);
    }

    // cross-oracle against fourier_of_measure on the sampled fixture
    const auto lor = lorentz_fixture(2.0, 0.1, 150.0, 0.01);
    auto f3 = [&](complex z) { return tr::stieltjes_transform(lor, z); };
    const complex via_stieltjes = tr::stieltjes_to_fourier(f3, 1.0, {0.2, 0.1, 0.05}, -160.0, 164.0);
    const complex direct = tr::fourier_of_measure(lor, 1.0);
    CHECK(std::abs(via_stieltjes - direct) < 3e-3);
}

TEST_CASE("fourier modulus near the first line decays at the half width") {
    const model::ModelParams p{0.05, 1.0, -1.0};
    const auto sm = density::rho_density(p, 4.0 * pi, 2.0 * pi / 4096, 8);
    const auto om = tr::omega_measure(sm);
    const double center = model::omega_ground(p) + p.eta * std::cos(p.phi);

    // window the density to [omega_1 - eta/2, omega_1 + eta/2]
    tr::SampledMeasure win;
    win.dx = om.dx;
    const long lo = std::lround((center - 0.5 - om.x0) / om.dx);
    const long hi = std::lround((center + 0.5 - om.x0) / om.dx);
    win.x0 = om.x0 + lo * om.dx;
    win.density.assign(om.density.begin() + lo, om.density.begin() + hi + 1);

    // least-squares slope of ln|F(t)| over a window clear of leakage
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double t = 1.0; t <= 25.0; t += 1.0) {
        const double y = std::log(std::abs(tr::fourier_of_measure(win, t)));
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double gamma1_half = p.eta * std::sin(p.phi);  // gamma_1/2
    CHECK(std::abs(-slope / gamma1_half - 1.0) < 0.15);
}

TEST_CASE("complete monotonicity checker") {
    std::vector<double> grid(40);
    for (int i = 0; i < 40; ++i) grid[i] = 0.5 + 7.8 * i / 39.0;

    const auto ok = tr::complete_monotonicity_check([](double b) { return std::exp(-b); }, grid,
                                                    8, 1e-10);
    CHECK(ok.pass);

    const auto zf = tr::complete_monotonicity_check(
        [](double b) { return std::exp(partition::log_z_full(b / (2.0 * pi), 0.5)); },
        [&] {
            std::vector<double> g(40);
            for (int i = 0; i < 40; ++i) g[i] = 1.0 + 7.0 * i / 39.0;
            return g;
        }(),
        8, 1e-10);
    CHECK(zf.pass);

    const auto bad =
        tr::complete_monotonicity_check([](double b) { return std::cos(b); }, grid, 4, 1e-10);
    CHECK_FALSE(bad.pass);

    // scale invariance: multiplying fn by a positive constant flips no verdicts
    const auto scaled = tr::complete_monotonicity_check(
        [](double b) { return 1e7 * std::exp(-b); }, grid, 8, 1e-10);
    CHECK(scaled.pass == ok.pass);
    const auto bad_scaled =
        tr::complete_monotonicity_check([](double b) { return 1e-6 * std::cos(b); }, grid, 4,
                                        1e-10);
    CHECK(bad_scaled.pass == bad.pass);

    CHECK_THROWS_AS(
        tr::complete_monotonicity_check([](double b) { return std::exp(-b); }, grid, 11, 1e-10),
        std::domain_error);
}
