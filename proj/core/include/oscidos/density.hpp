#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "oscidos/model.hpp"

// The effective measure of states mu_phi = delta_{omega_phi} + phi(omega) domega:
// kernel g, iterated convolutions, the series rho = sum_n g^{*n}/n!, the
// rescaling to phi(omega), Lorentz profiles, the exact coefficient
// recursions c_{jn}, complex-plane evaluation along rays, residue and jump
// probes, and thermal peak shifts.

namespace oscidos::density {

using complex = std::complex<double>;
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double binomial_mass(int j) { return 0.5 * (j + 1.0) * (j + 2.0); }

// ---------------------------------------------------------------- kernel g

// g(t) = (6/t) Re(1/(1-e^{-tau}) - 1/tau - 1/2), tau = i e^{-i phi} t, with
// the limit sin(phi)/2 at t = 0.  Nonnegative for phi in (0, pi/2].
double g_real(double t, double phi);

// Meromorphic continuation
//   g(z) = (3/z)[ 1/(1-exp(-i e^{-i phi} z)) + 1/(1-exp(i e^{i phi} z))
//                 - 2 sin(phi)/z - 1 ],
// simple poles at q_j = 2 pi j e^{-i phi} and conjugates, j != 0.
// Throws within distance 1e-8 of a pole.
complex g_complex(complex z, double phi);

// sup of g on [0, t_max], estimated on a spike-resolving grid (10% headroom).
double g_sup(double phi, double t_max);

// -------------------------------------------------------- sampled measure

struct StateMeasure {
    double phi;
    double eta;
    double atom_location;  // omega_phi
    double atom_mass;      // 1
    double dt;             // uniform grid spacing, t_i = i*dt (reduced variable)
    std::vector<double> density;      // rho(t_i) >= 0
    int n_terms;
    double truncation_bound;  // sup over the grid of the dropped series tail

    double t_max() const { return dt * double(density.size() - 1); }
};

// Trapezoid convolution of two functions sampled on the same uniform grid
// starting at 0; exact 0 at t = 0.  Grid-length mismatch throws.
std::vector<double> convolve(const std::vector<double>& h, const std::vector<double>& k,
                             double dt);
std::vector<complex> convolve(const std::vector<complex>& h, const std::vector<complex>& k,
                              double dt);

// rho = sum_{n=1..n_terms} g^{*n}/n! on the grid [0, t_max] with spacing dt.
// Every partial term is nonnegative; the certified Lemma-"anal cont" bound
// on the dropped tail is recorded in truncation_bound and enforced only
// when bound_tol is finite.
StateMeasure rho_density(const model::ModelParams& p, double t_max, double dt, int n_terms,
                         double bound_tol = 0.0);

// Smallest n with (t_max * sup g)^n / n! < 1e-10, floor 15, capped at 500.
int default_n_terms(double phi, double t_max);

struct SampledDensity {
    double x0;
    double dx;
    std::vector<double> values;

    double x_max() const { return x0 + dx * double(values.size() - 1); }
    // linear interpolation; zero below x0, throws beyond the grid end
    double operator()(double x) const;
};

// phi(omega) = (2 pi / eta) rho((2 pi / eta)(omega - omega_phi)) for
// omega >= omega_phi, zero below.
SampledDensity phi_of_omega(const StateMeasure& m);

// ------------------------------------------------------------ line shapes

struct LorentzLine {
    int j;
    double center;      // omega_j = omega_phi + j eta cos phi
    double half_width;  // j eta sin phi  (gamma_j / 2)
    double mass;        // binomial(j+2, 2)
};

LorentzLine lorentz_line(int j, const model::ModelParams& p);

// ell_j(x) = -1/(2 pi i (x - p_j)) + 1/(2 pi i (x - conj p_j)); on the real
// line the unit-mass Lorentz profile centered at omega_j.
complex lorentz_profile(int j, const model::ModelParams& p, complex x);
double lorentz_profile(int j, const model::ModelParams& p, double omega);

// Reduced-variable pair-pole profile with poles at q_j, conj q_j (the image
// of ell_j under the scaling map), unit mass in the reduced variable.
complex lorentz_profile_reduced(int j, double phi, complex z);

// mu_0 = sum_j binom(j+2,2) delta_{(j+3/2) eta}; atoms for j = 0..j_max.
struct Atom {
    double location;
    double mass;
};
std::vector<Atom> mu0_atoms(int j_max, double eta);

// ------------------------------------------------- exact coefficient table

// c_{j1} = 3/j, c_{j,n+1} = sum_{k<j} c_{k1} c_{j-k,n}; tilde variant with a
// minus sign.  Exact rationals; c[j-1][n-1] holds c_{jn} for n <= j.
struct CoefficientTable {
    int j_max;
    std::vector<std::vector<Rational>> c;
    std::vector<std::vector<Rational>> c_tilde;
    std::vector<Rational> row_sum;        // sum_n c_{jn}/n!  ( = binom(j+2,2) )
    std::vector<Rational> row_sum_tilde;  // (-1)^{j+1} binom(3,j), 0 for j > 3
};

CoefficientTable coefficient_table(int j_max);

// ---------------------------------------------------- complex-plane probes

// rho(z) = sum_{n<=n_terms} g^{*n}(z)/n! along the straight segment [0, z]
// (incremental trapezoid convolution on the ray, spacing ~dt of arclength).
// Rejects z on or beyond the cut rays arg = +-phi with |z| >= 2 pi.
complex density_complex(complex z, double phi, int n_terms, double dt = 0.003067961575771282);

// a + b r ln r + c r fit through (r_k, f(pole + r_k * direction) * (r_k *
// direction)) over the radius schedule; returns a (the residue estimate).
complex extrapolate_residue(const std::function<complex(complex)>& fn, complex pole,
                            complex direction, const std::vector<double>& radii);

// lim (z - q_j) rho(z) along the perpendicular ray into the cone; expected
// -binom(j+2,2)/(2 pi i) up to the logarithmic remainder.
complex residue_probe(int j, double phi, int n_terms, const std::vector<double>& radii,
                      double dt = 0.003067961575771282);

// Jump of g*g across the cut between q_j and q_{j+1}:
//   F_+(z) - F_-(z) = sum_{l=1..j} (6/l) g(z - 2 pi l e^{-i phi}),
// z = s e^{-i phi}, 2 pi j < s < 2 pi (j+1).
complex jump_g2(double s, double phi);

// Two-sided quadrature of the straight-line convolution approached from
// above/below the ray, Richardson-extrapolated over the angle schedule.
complex jump_g2_two_sided(double s, double phi, const std::vector<double>& eps_schedule);

// ------------------------------------------------------ thermal peak shift

struct PeakShift {
    double exact;    // (-1 + sqrt(1 - beta^2 gamma_j^2/4))/beta, pure-Lorentz root
    double numeric;  // argmax of e^{-beta omega} ell_j(omega) minus omega_j
};

// Requires 2/beta > gamma_j (the paper's 2T > gamma_j condition).
PeakShift thermal_peak_shift_lorentz(int j, const model::ModelParams& p, double beta);

// argmax of e^{-beta omega} phi(omega) near line j, minus omega_j.
double thermal_peak_shift_measure(int j, const model::ModelParams& p, double beta,
                                  const StateMeasure& m);

}  // namespace oscidos::density
