#pragma once

#include <complex>

#include "oscidos/special.hpp"

// Partition-function formulas for the charged oscillator: the free value
// Z0, the cutoff product Z(beta; gamma) (UV-regular form), the renormalized
// closed form Z(beta) via |Gamma(i rho e^{-i phi})|^2, the Binet-integral
// route for ln Z, the Goeppert-Mayer product variant, the excess free
// energy and the thermal characteristic function.  Everything is computed
// and combined in log space.

namespace oscidos::partition {

enum class Route { closed_form, product, binet, laplace_of_measure };

struct PartitionValue {
    double value;       // exp(log_value); may underflow to 0 at large rho
    double log_value;   // authoritative
    Route route;
    long l_max{0};          // product truncation point, when applicable
    double tail_bound{0.0};  // certified bound on the log-space truncation error
};

// Z0 = (2 sinh(pi rho))^{-3}, partition function of the uncoupled oscillator.
double z0(double rho);
double log_z0(double rho);

// Eq. (UVreg): Z(beta;gamma) = [2 pi rho e^{-2 rho ln(1+gamma) sin phi}
//   prod_l (1 + rho^2/l^2 + (4/pi)(rho/l) sin(phi) arctan(gamma rho/l))]^{-3}.
// Product summed exactly to l_max, then an analytic inverse-power tail; the
// reported value includes the tail so the certified truncation error is
// tail_bound.  Throws when l_max is too small for the tail expansion
// (gamma*rho/l_max must be <= 1/2).
PartitionValue z_cutoff(double rho, double phi, double gamma_uv, long l_max,
                        const special::PrecisionPolicy& policy = {});

// Eq. (UVsing): Z(beta) = [(rho/2pi) e^{-2 rho ln(rho) sin phi}
//   |Gamma(i rho e^{-i phi})|^2]^3, the UV limit of z_cutoff.
PartitionValue z_full(double rho, double phi);
double log_z_full(double rho, double phi);

// ln Z by Eq. (lnZ): int_0^inf e^{-t rho} g(t) dt - t_phi * rho, with the
// nonnegative kernel g from the density module; panelized adaptive
// quadrature with panel edges at the kernel ridges t = 2 pi j cos phi.
// Rejects phi = 0 (kernel poles reach the real axis).
double log_z_binet(double rho, double phi, const special::PrecisionPolicy& policy = {});

// Remark after Eq. (UVreg): the Goeppert-Mayer variant
//   [2 pi rho prod_l (1 + rho^2/l^2
//        + (4/pi) sin(phi) (gamma - (l/rho) arctan(gamma rho/l)))]^{-3};
// no renormalization factor, gamma -> inf diverges.
PartitionValue z_goeppert_mayer(double rho, double phi, double gamma_uv, long l_max,
                                const special::PrecisionPolicy& policy = {});

// F_ex = -(1/beta) ln(Z/Z0), beta = 2 pi rho / eta (hbar = k = 1).
double excess_free_energy(double rho, double phi, double eta = 1.0);

// F_ex minus its beta -> inf limit omega_phi - (3/2) eta (the
// coupling-induced zero-point shift); this is the part obeying the
// quadratic low-temperature law.
double excess_free_energy_thermal(double rho, double phi, double eta = 1.0);

// Z(beta + i t)/Z(beta) by analytic continuation of Eq. (UVsing) in rho
// (rho -> rho + i eta t / 2 pi); the Fourier transform of the thermal
// probability measure.
std::complex<double> char_function(double rho, double phi, double t, double eta = 1.0);

}  // namespace oscidos::partition
