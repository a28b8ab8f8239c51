#include "oscidos/model.hpp"

#include <cmath>
#include <stdexcept>

namespace oscidos::model {

void validate(const ModelParams& p) {
    if (!(p.phi >= 0.0 && p.phi < pi / 2.0))
        throw std::domain_error("ModelParams: phi must satisfy 0 <= phi < pi/2");
    if (!(p.eta > 0.0))
        throw std::domain_error("ModelParams: eta must be positive");
    // gamma_uv <= 0 encodes a removed cutoff; any positive value is fine
    if (p.gamma_uv == 0.0)
        throw std::domain_error("ModelParams: gamma_uv must be positive or removed");
}

ReducedTemperature reduced_temperature_from_beta(double beta, double eta) {
    if (!(beta > 0.0) || !(eta > 0.0))
        throw std::domain_error("reduced_temperature_from_beta: beta and eta must be positive");
    return ReducedTemperature{eta * beta / (2.0 * pi)};
}

double phi_from_sin(double sin_phi) {
    if (!(sin_phi >= 0.0 && sin_phi < 1.0))
        throw std::domain_error("phi_from_sin: argument must lie in [0, 1)");
    return std::asin(sin_phi);
}

double sin_from_phi(double phi) {
    if (!(phi >= 0.0 && phi < pi / 2.0))
        throw std::domain_error("sin_from_phi: phi must satisfy 0 <= phi < pi/2");
    return std::sin(phi);
}

double omega_ground(const ModelParams& p) {
    validate(p);
    return 3.0 / pi * (std::sin(p.phi) + (pi / 2.0 - p.phi) * std::cos(p.phi)) * p.eta;
}

double t_phi(double phi) {
    return 6.0 * (std::sin(phi) + (pi / 2.0 - phi) * std::cos(phi));
}

ResonanceGeometry resonance_geometry(const ModelParams& p, int j_max) {
    validate(p);
    if (j_max < 1) throw std::domain_error("resonance_geometry: j_max must be >= 1");
    if (p.phi == 0.0)
        throw std::domain_error("resonance_geometry: poles on real axis at phi = 0");

    ResonanceGeometry g;
    g.omega_ground = omega_ground(p);
    g.t_phi = t_phi(p.phi);
    const std::complex<double> dir = std::polar(1.0, -p.phi);
    g.reduced_poles.reserve(j_max);
    g.physical_poles.reserve(j_max);
    g.widths.reserve(j_max);
    g.centers.reserve(j_max);
    for (int j = 1; j <= j_max; ++j) {
        g.reduced_poles.push_back(2.0 * pi * j * dir);
        g.physical_poles.push_back(g.omega_ground + double(j) * p.eta * dir);
        g.widths.push_back(2.0 * j * p.eta * std::sin(p.phi));
        g.centers.push_back(g.omega_ground + double(j) * p.eta * std::cos(p.phi));
    }
    return g;
}

}  // namespace oscidos::model
