#pragma once

#include <complex>

// Scalar special functions used by the partition and density formulas:
// principal-branch log Gamma on the right half-plane, the Binet integral
// route, the positivity kernel h(w) = Re(1/(1-e^{-w}) - 1/w - 1/2), and the
// arctan partial sums for the Euler-Mascheroni constant.

namespace oscidos::special {

using complex = std::complex<double>;

struct PrecisionPolicy {
    double abs_tol{1e-12};
    double rel_tol{1e-12};
    int max_refinements{40};
};

void validate(const PrecisionPolicy& policy);

// Principal-branch ln Gamma(z) for Re z > 0.  Lanczos rational
// approximation (13-term, g = 6.0246800407767296) with argument promotion
// via Gamma(z) = Gamma(z+1)/z; relative error ~1e-13 on the test set.
// Rejects Re z <= 0.
complex log_gamma(complex z);

// ln Gamma via Binet's integral
//   ln Gamma(z) = int_0^inf e^{-tz}/t (1/(1-e^{-t}) - 1/t - 1/2) dt
//               + ln(2 pi)/2 + (z - 1/2) ln z - z,       Re z > 0,
// by adaptive quadrature on [0, T] with e^{-T Re z}/Re z < abs_tol.
complex binet_log_gamma(complex z, const PrecisionPolicy& policy = {});

// h(w) = Re(1/(1-e^{-w}) - 1/w - 1/2); >= 0 for Re w >= 0, zero exactly on
// Re w = 0.  Signals pole proximity near w = 2 pi i k, k != 0.
double h_kernel(complex w);

// Complex-valued kernel 1/(1-e^{-w}) - 1/w - 1/2 (h_kernel is its real
// part); series evaluation near w = 0.
complex bernoulli_kernel(complex w);

// (2/pi) sum_{l=1..L} arctan(s/l)/l - ln s; converges to the
// Euler-Mascheroni constant as s, L -> inf.
double euler_mascheroni_partial(double s, long L);

}  // namespace oscidos::special
