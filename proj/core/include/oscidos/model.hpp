#pragma once

#include <complex>
#include <vector>

// Dimensionless parameterization of the harmonically bound charge in a
// photon field: coupling angle phi (sin phi ~ e^2), oscillator frequency
// eta, UV cutoff gamma = cC/eta, reduced inverse temperature
// rho = eta*beta/(2*pi).  Units: hbar = k = c = 1.

namespace oscidos::model {

inline constexpr double pi = 3.14159265358979323846;

struct ModelParams {
    double phi{0.0};        // coupling angle, radians, 0 <= phi < pi/2
    double eta{1.0};        // oscillator frequency, > 0
    double gamma_uv{-1.0};  // dimensionless UV cutoff, > 0; < 0 means removed

    bool cutoff_removed() const { return gamma_uv <= 0.0; }
};

// Throws std::domain_error when a field is outside its admissible range.
void validate(const ModelParams& p);

struct ReducedTemperature {
    double rho;  // eta*beta/(2*pi), > 0

    double beta(double eta) const { return 2.0 * pi * rho / eta; }
};

ReducedTemperature reduced_temperature_from_beta(double beta, double eta);

// sin(phi) = eta*alpha/(3*omega_CF); with omega_CF folded into the
// dimensionless scheme this is the pure conversion sin(phi) = coupling.
// Kept explicit and never applied implicitly.
double phi_from_sin(double sin_phi);
double sin_from_phi(double phi);

// omega_phi = (3/pi)(sin phi + (pi/2 - phi) cos phi) * eta, the location of
// the atom of the effective measure of states (coupled zero point).
double omega_ground(const ModelParams& p);

// t_phi = 6 (sin phi + (pi/2 - phi) cos phi); satisfies t_phi * rho = beta * omega_phi.
double t_phi(double phi);

struct ResonanceGeometry {
    double omega_ground;                        // atom location
    double t_phi;                               // dimensionless slope
    std::vector<std::complex<double>> reduced_poles;   // q_j = 2*pi*j*e^{-i phi}, j = 1..j_max
    std::vector<std::complex<double>> physical_poles;  // p_j = omega_phi + j*eta*e^{-i phi}
    std::vector<double> widths;                 // gamma_j = 2*j*eta*sin(phi)
    std::vector<double> centers;                // omega_j = omega_phi + j*eta*cos(phi)

    std::size_t j_max() const { return reduced_poles.size(); }
};

// Lower-half-plane poles and the Lorentz-line data for j = 1..j_max; the
// complex-conjugate family is implicit.  Rejects phi = 0 (poles on the
// real axis).
ResonanceGeometry resonance_geometry(const ModelParams& p, int j_max);

}  // namespace oscidos::model
