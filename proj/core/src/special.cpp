#include "oscidos/special.hpp"

#include <cmath>
#include <stdexcept>

#include "oscidos/quadrature.hpp"

namespace oscidos::special {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double ln_2pi = 1.8378770664093454836;

// B_{2k} w^{2k-1} / (2k)!, k = 1..8; radius of use 0.5, truncation < 1e-15.
constexpr double kernel_coeff[] = {
    8.3333333333333333e-02,   // w
    -1.3888888888888889e-03,  // w^3
    3.3068783068783069e-05,   // w^5
    -8.2671957671957672e-07,  // w^7
    2.0876756987868099e-08,   // w^9
    -5.2841901386874932e-10,  // w^11
    1.3382536530684679e-11,   // w^13
    -3.3896802963225829e-13,  // w^15
};

// Lanczos 13-term rational, g = 6.024680040776729583740234375, documented
// max relative error ~1.1e-17 at double evaluation (Godfrey coefficients).
constexpr double lanczos_g = 6.024680040776729583740234375;
constexpr double lanczos_num[13] = {
    23531376880.410759688572007674451636754734,
    42919803642.649098768957899047001988850926,
    35711959237.355668049440185451547166705960,
    17921034426.037209699919755754458931112671,
    6039542586.3520280050642916443072979210699,
    1439720407.3117216736632230727949123939715,
    248874557.86205415651146038641322942321632,
    31426415.585400194380614231628318205362874,
    2876370.6289353724412254090516208496135991,
    186056.26539522349504029498971604569928220,
    8071.6720023658162106380029022722506138218,
    210.82427775157934587250973392071336271166,
    2.5066282746310002701649081771338373386264,
};
constexpr double lanczos_den[13] = {
    0.0, 39916800.0, 120543840.0, 150917976.0, 105258076.0, 45995730.0,
    13339535.0, 2637558.0, 357423.0, 32670.0, 1925.0, 66.0, 1.0,
};

complex horner(const double (&c)[13], complex z) {
    complex acc = c[12];
    for (int i = 11; i >= 0; --i) acc = acc * z + c[i];
    return acc;
}

}  // namespace

void validate(const PrecisionPolicy& policy) {
    if (!(policy.abs_tol > 0.0) || !(policy.rel_tol > 0.0))
        throw std::domain_error("PrecisionPolicy: tolerances must be positive");
    if (policy.max_refinements < 1)
        throw std::domain_error("PrecisionPolicy: max_refinements must be >= 1");
}

complex bernoulli_kernel(complex w) {
    if (std::abs(w) < 0.5) {
        const complex w2 = w * w;
        complex acc = kernel_coeff[7];
        for (int i = 6; i >= 0; --i) acc = acc * w2 + kernel_coeff[i];
        return acc * w;
    }
    // 1 - e^{-w} with expm1 on the real part for accuracy near the
    // imaginary axis
    const complex den = -std::exp(-w) + 1.0;
    if (std::abs(den) < 1e-13)
        throw std::runtime_error("bernoulli_kernel: pole proximity (|1-e^{-w}| underflow)");
    return 1.0 / den - 1.0 / w - 0.5;
}

double h_kernel(complex w) {
    if (w == complex(0.0, 0.0)) throw std::domain_error("h_kernel: w = 0");
    if (w.real() < 0.0) throw std::domain_error("h_kernel: requires Re w >= 0");
    return bernoulli_kernel(w).real();
}

complex log_gamma(complex z) {
    if (!(z.real() > 0.0)) throw std::domain_error("log_gamma: requires Re z > 0");
    complex shift = 0.0;
    while (z.real() < 8.0) {
        shift += std::log(z);
        z += 1.0;
    }
    const complex sum = horner(lanczos_num, z) / horner(lanczos_den, z);
    const complex zgh = z + (lanczos_g - 0.5);
    return (z - 0.5) * std::log(zgh) - zgh + std::log(sum) - shift;
}

complex binet_log_gamma(complex z, const PrecisionPolicy& policy) {
    if (!(z.real() > 0.0)) throw std::domain_error("binet_log_gamma: requires Re z > 0");
    validate(policy);

    // real-axis kernel (1/(1-e^{-t}) - 1/t - 1/2)/t, regular at 0
    auto b = [](double t) -> double {
        if (t < 0.5) {
            const double t2 = t * t;
            double acc = kernel_coeff[7];
            for (int i = 6; i >= 0; --i) acc = acc * t2 + kernel_coeff[i];
            return acc;
        }
        return (1.0 / (-std::expm1(-t)) - 1.0 / t - 0.5) / t;
    };
    const double re = z.real();
    const double T = std::max(10.0, std::log(1.0 / (policy.abs_tol * re)) / re);
    auto f = [&](double t) { return std::exp(-t * z) * b(t); };
    const complex integral =
        quad::adaptive_simpson<complex>(f, 0.0, T, policy.abs_tol, policy.max_refinements);
    return integral + 0.5 * ln_2pi + (z - 0.5) * std::log(z) - z;
}

double euler_mascheroni_partial(double s, long L) {
    if (!(s > 0.0)) throw std::domain_error("euler_mascheroni_partial: s must be positive");
    if (L < 1) throw std::domain_error("euler_mascheroni_partial: L must be >= 1");
    quad::KahanSum<double> acc;
    for (long l = 1; l <= L; ++l) acc.add(std::atan(s / double(l)) / double(l));
    return 2.0 / pi * acc.value() - std::log(s);
}

}  // namespace oscidos::special
