#include "oscidos/partition.hpp"

#include <cmath>
#include <stdexcept>

#include "oscidos/density.hpp"
#include "oscidos/model.hpp"
#include "oscidos/quadrature.hpp"

namespace oscidos::partition {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double ln_2pi = 1.8378770664093454836;

void check_rho(double rho) {
    if (!(rho > 0.0)) throw std::domain_error("partition: rho must be positive");
}
void check_phi(double phi) {
    if (!(phi >= 0.0 && phi < pi / 2.0))
        throw std::domain_error("partition: phi must satisfy 0 <= phi < pi/2");
}

// ln Gamma with promotion from anywhere off the cut; the shift identity
// logGamma(z) = logGamma(z+1) - Log z holds on Im z != 0 and on Re z > 0.
std::complex<double> log_gamma_promoted(std::complex<double> z) {
    std::complex<double> shift = 0.0;
    while (z.real() < 8.0) {
        shift += std::log(z);
        z += 1.0;
    }
    return special::log_gamma(z) - shift;
}

std::complex<double> log_z_continued(std::complex<double> rho, double phi) {
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> za = i * rho * std::polar(1.0, -phi);
    const std::complex<double> zb = -i * rho * std::polar(1.0, phi);
    return 3.0 * (std::log(rho) - ln_2pi - 2.0 * rho * std::log(rho) * std::sin(phi) +
                  log_gamma_promoted(za) + log_gamma_promoted(zb));
}

// Analytic tail of sum_{l>L} ln(1 + a2/l^2 + a4/l^4 + a6/l^6 + a8/l^8),
// with `extra10` an additional certified l^{-10} coefficient bound from the
// caller's h_l expansion remainder.  Returns {tail, bound}.
struct Tail {
    double value;
    double bound;
};

Tail log_product_tail(long L, double a2, double a4, double a6, double a8, double extra10) {
    const double A2 = a2;
    const double A4 = a4 - 0.5 * a2 * a2;
    const double A6 = a6 - a2 * a4 + a2 * a2 * a2 / 3.0;
    const double A8 = a8 - 0.5 * a4 * a4 - a2 * a6 + a2 * a2 * a4 - 0.25 * a2 * a2 * a2 * a2;
    const double T2 = quad::inv_power_tail(L, 2);
    const double T4 = quad::inv_power_tail(L, 4);
    const double T6 = quad::inv_power_tail(L, 6);
    const double T8 = quad::inv_power_tail(L, 8);
    const double T10 = quad::inv_power_tail(L, 10);
    const double value = A2 * T2 + A4 * T4 + A6 * T6 + A8 * T8;
    // dropped l^{-10} pieces of h^k, k = 1..4, plus the log-series rest
    const double m2 = std::abs(a2), m4 = std::abs(a4), m6 = std::abs(a6), m8 = std::abs(a8);
    double c10 = extra10;
    c10 += m2 * m8 + m4 * m6;                     // from h^2
    c10 += m2 * m2 * m6 + m2 * m4 * m4;           // from h^3
    c10 += m2 * m2 * m2 * m4;                     // from h^4
    c10 += 0.4 * m2 * m2 * m2 * m2 * m2;          // |ln(1+h)-P4(h)| <= (2/5) h^5, h <= 1/2
    const double bound = 4.0 * c10 * T10;
    return {value, bound};
}

PartitionValue assemble(double log_factor_sum, Route route, long l_max, double bound) {
    PartitionValue v;
    v.log_value = -3.0 * log_factor_sum;
    v.value = std::exp(v.log_value);
    v.route = route;
    v.l_max = l_max;
    v.tail_bound = 3.0 * bound;
    return v;
}

}  // namespace

double log_z0(double rho) {
    check_rho(rho);
    // -3 ln(2 sinh(pi rho)), stable at large rho
    return -3.0 * (pi * rho + std::log1p(-std::exp(-2.0 * pi * rho)));
}

double z0(double rho) { return std::exp(log_z0(rho)); }

PartitionValue z_cutoff(double rho, double phi, double gamma_uv, long l_max,
                        const special::PrecisionPolicy& policy) {
    check_rho(rho);
    check_phi(phi);
    special::validate(policy);
    if (!(gamma_uv > 0.0)) throw std::domain_error("z_cutoff: gamma_uv must be positive (finite)");
    if (l_max < 1) throw std::domain_error("z_cutoff: l_max must be >= 1");
    const double s = std::sin(phi);
    const double gr = gamma_uv * rho;
    if (gr / double(l_max + 1) > 0.5)
        throw std::runtime_error(
            "z_cutoff: l_max too small for the tail expansion (need l_max >= 2*gamma*rho)");

    quad::KahanSum<double> acc;
    for (long l = 1; l <= l_max; ++l) {
        const double x = rho / double(l);
        acc.add(std::log1p(x * x + 4.0 / pi * x * s * std::atan(gamma_uv * x)));
    }
    const double a2 = rho * rho + 4.0 / pi * s * gamma_uv * rho * rho;
    const double a4 = -4.0 / (3.0 * pi) * s * gr * gr * gr * rho;
    const double a6 = 4.0 / (5.0 * pi) * s * gr * gr * gr * gr * gr * rho;
    const double a8 = -4.0 / (7.0 * pi) * s * gr * gr * gr * gr * gr * gr * gr * rho;
    const double arctan_rest = 4.0 / (9.0 * pi) * s * std::pow(gr, 9.0) * rho;
    Tail tail = log_product_tail(l_max, a2, a4, a6, a8, arctan_rest);

    const double log_factor = std::log(2.0 * pi * rho) - 2.0 * rho * std::log1p(gamma_uv) * s +
                              acc.value() + tail.value;
    PartitionValue v = assemble(log_factor, Route::product, l_max, tail.bound);
    if (v.tail_bound > policy.rel_tol)
        throw std::runtime_error("z_cutoff: certified tail bound exceeds policy.rel_tol");
    return v;
}

double log_z_full(double rho, double phi) {
    check_rho(rho);
    check_phi(phi);
    return log_z_continued(std::complex<double>(rho, 0.0), phi).real();
}

PartitionValue z_full(double rho, double phi) {
    PartitionValue v;
    v.log_value = log_z_full(rho, phi);
    v.value = std::exp(v.log_value);
    v.route = Route::closed_form;
    return v;
}

double log_z_binet(double rho, double phi, const special::PrecisionPolicy& policy) {
    check_rho(rho);
    if (!(phi > 0.0 && phi < pi / 2.0))
        throw std::domain_error("log_z_binet: pole set reaches the real axis at phi = 0");
    special::validate(policy);

    // cutoff with int_T^inf e^{-rho t} g(t) dt <= 3 e^{-rho T}/(rho T) below tol
    double T = std::max(20.0 / rho, 4.0 * pi);
    for (int it = 0; it < 4; ++it)
        T = std::max(4.0 * pi, std::log(30.0 / (policy.abs_tol * rho * T)) / rho);

    auto f = [&](double t) { return density::g_real(t, phi); };
    auto integrand = [&](double t) { return std::exp(-rho * t) * f(t); };

    // panel edges at the kernel ridges t = 2 pi j cos phi
    const double step = 2.0 * pi * std::cos(phi);
    const long panels = std::max(1L, long(std::ceil(T / step)));
    const double panel_tol = policy.abs_tol / double(panels + 1);
    quad::KahanSum<double> acc;
    for (long j = 0; j < panels; ++j) {
        const double a = j * step;
        const double b = std::min(T, (j + 1) * step);
        acc.add(quad::adaptive_simpson<double>(integrand, a, b, panel_tol,
                                               policy.max_refinements));
        if (b >= T) break;
    }
    return acc.value() - model::t_phi(phi) * rho;
}

PartitionValue z_goeppert_mayer(double rho, double phi, double gamma_uv, long l_max,
                                const special::PrecisionPolicy& policy) {
    check_rho(rho);
    check_phi(phi);
    special::validate(policy);
    if (!(gamma_uv > 0.0))
        throw std::domain_error("z_goeppert_mayer: gamma_uv must be positive (finite)");
    if (l_max < 1) throw std::domain_error("z_goeppert_mayer: l_max must be >= 1");
    const double s = std::sin(phi);
    const double gr = gamma_uv * rho;
    if (gr / double(l_max + 1) > 0.5)
        throw std::runtime_error(
            "z_goeppert_mayer: l_max too small for the tail expansion");

    quad::KahanSum<double> acc;
    for (long l = 1; l <= l_max; ++l) {
        const double x = rho / double(l);
        acc.add(std::log1p(x * x +
                           4.0 / pi * s * (gamma_uv - std::atan(gamma_uv * x) / x)));
    }
    const double a2 = rho * rho + 4.0 / (3.0 * pi) * s * gr * gr * gamma_uv;
    const double a4 = -4.0 / (5.0 * pi) * s * std::pow(gr, 4.0) * gamma_uv;
    const double a6 = 4.0 / (7.0 * pi) * s * std::pow(gr, 6.0) * gamma_uv;
    const double a8 = -4.0 / (9.0 * pi) * s * std::pow(gr, 8.0) * gamma_uv;
    const double arctan_rest = 4.0 / (11.0 * pi) * s * std::pow(gr, 10.0) * gamma_uv;
    if (a2 / double((l_max + 1) * (l_max + 1)) > 0.5)
        throw std::runtime_error("z_goeppert_mayer: l_max too small for the log series");
    Tail tail = log_product_tail(l_max, a2, a4, a6, a8, arctan_rest);

    const double log_factor = std::log(2.0 * pi * rho) + acc.value() + tail.value;
    PartitionValue v = assemble(log_factor, Route::product, l_max, tail.bound);
    if (v.tail_bound > policy.rel_tol)
        throw std::runtime_error("z_goeppert_mayer: certified tail bound exceeds policy.rel_tol");
    return v;
}

double excess_free_energy(double rho, double phi, double eta) {
    check_rho(rho);
    check_phi(phi);
    if (!(eta > 0.0)) throw std::domain_error("excess_free_energy: eta must be positive");
    const double beta = 2.0 * pi * rho / eta;
    return -(log_z_full(rho, phi) - log_z0(rho)) / beta;
}

double excess_free_energy_thermal(double rho, double phi, double eta) {
    const double shift =
        model::omega_ground(model::ModelParams{phi, eta, -1.0}) - 1.5 * eta;
    return excess_free_energy(rho, phi, eta) - shift;
}

std::complex<double> char_function(double rho, double phi, double t, double eta) {
    check_rho(rho);
    check_phi(phi);
    if (!(eta > 0.0)) throw std::domain_error("char_function: eta must be positive");
    const std::complex<double> rho_c(rho, eta * t / (2.0 * pi));
    return std::exp(log_z_continued(rho_c, phi) - log_z_continued({rho, 0.0}, phi));
}

}  // namespace oscidos::partition
