#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "oscidos/density.hpp"

// Measure-level transform toolkit: Laplace transform of a sampled measure,
// Stieltjes transform and its boundary-value inversion, Fourier transform,
// the Stieltjes-to-Fourier conversion, and the divided-difference complete
// monotonicity checker.

namespace oscidos::transforms {

using complex = std::complex<double>;
using Evaluator = std::function<complex(complex)>;

// Atoms plus an absolutely continuous part sampled on a uniform grid.
struct SampledMeasure {
    std::vector<density::Atom> atoms;
    double x0{0.0};
    double dx{0.0};
    std::vector<double> density;

    double x_end() const { return density.empty() ? x0 : x0 + dx * double(density.size() - 1); }
    double total_mass() const;
};

// Reduced-variable view delta_0 + rho(t) dt of a StateMeasure.
SampledMeasure reduced_measure(const density::StateMeasure& m);
// Physical view delta_{omega_phi} + phi(omega) domega.
SampledMeasure omega_measure(const density::StateMeasure& m);

struct TransformReport {
    std::vector<double> points;
    std::vector<double> values;
    std::vector<double> error_estimates;
    std::vector<std::string> notes;
    bool pass{true};
};

// Atom terms plus the trapezoid integral of e^{-rho x} against the density;
// throws "insufficient grid length" when the certified tail estimate
// exceeds tail_tol.  The estimate is written to *tail_bound when given.
double laplace_of_measure(const SampledMeasure& m, double rho, double tail_tol = 1e-6,
                          double* tail_bound = nullptr);
double laplace_of_measure(const density::StateMeasure& m, double rho, double tail_tol = 1e-6,
                          double* tail_bound = nullptr);

// int dmu(x)/(x - z); Herglotz, conj(f(conj z)) = f(z).  Rejects z within a
// grid cell of the support.
complex stieltjes_transform(const SampledMeasure& m, complex z);

// mu([0, t]) ~ (1/pi) int_0^{t+delta} Im f(s + i eps) ds, extrapolated
// eps -> 0 (Neville over the schedule) then delta -> 0.
double stieltjes_invert(const Evaluator& f, double t, const std::vector<double>& eps_schedule,
                        const std::vector<double>& delta_schedule);

// int e^{-i t x} dmu(x).
complex fourier_of_measure(const SampledMeasure& m, double t);

// (1/pi) int_window e^{-i t w} Im f(w + i eps) dw, extrapolated eps -> 0;
// converts the Stieltjes transform of a finite Borel measure into its
// Fourier transform.  The window must cover the support plus the Poisson
// tails at the coarsest eps.
complex stieltjes_to_fourier(const Evaluator& f, double t,
                             const std::vector<double>& eps_schedule, double window_lo,
                             double window_hi);

// Forward divided differences up to max_order on the grid (long double
// accumulation); flags any (-1)^k dd below -tolerance * scale_k with
// scale_k = max_i |dd_k,i|.  Throws when the roundoff estimate dominates
// the order-k scale (grid too coarse).
TransformReport complete_monotonicity_check(const std::function<double(double)>& fn,
                                            const std::vector<double>& beta_grid, int max_order,
                                            double tolerance);

}  // namespace oscidos::transforms
