#include "oscidos/transforms.hpp"

#include <cmath>
#include <stdexcept>

#include "oscidos/quadrature.hpp"

namespace oscidos::transforms {

namespace {

constexpr double pi = 3.14159265358979323846;

double trapezoid_weight(std::size_t i, std::size_t n) {
    return (i == 0 || i + 1 == n) ? 0.5 : 1.0;
}

double neville_to_zero_real(const std::vector<double>& x, std::vector<double> y) {
    for (std::size_t level = 1; level < x.size(); ++level)
        for (std::size_t i = 0; i + level < x.size(); ++i)
            y[i] = (x[i + level] * y[i] - x[i] * y[i + 1]) / (x[i + level] - x[i]);
    return y[0];
}

complex neville_to_zero(const std::vector<double>& x, std::vector<complex> y) {
    for (std::size_t level = 1; level < x.size(); ++level)
        for (std::size_t i = 0; i + level < x.size(); ++i)
            y[i] = (x[i + level] * y[i] - x[i] * y[i + 1]) / (x[i + level] - x[i]);
    return y[0];
}

}  // namespace

double SampledMeasure::total_mass() const {
    double acc = 0.0;
    for (const auto& a : atoms) acc += a.mass;
    for (std::size_t i = 0; i < density.size(); ++i)
        acc += trapezoid_weight(i, density.size()) * density[i] * dx;
    return acc;
}

SampledMeasure reduced_measure(const density::StateMeasure& m) {
    SampledMeasure out;
    out.atoms = {{0.0, m.atom_mass}};
    out.x0 = 0.0;
    out.dx = m.dt;
    out.density = m.density;
    return out;
}

SampledMeasure omega_measure(const density::StateMeasure& m) {
    const density::SampledDensity d = density::phi_of_omega(m);
    SampledMeasure out;
    out.atoms = {{m.atom_location, m.atom_mass}};
    out.x0 = d.x0;
    out.dx = d.dx;
    out.density = d.values;
    return out;
}

double laplace_of_measure(const SampledMeasure& m, double rho, double tail_tol,
                          double* tail_bound) {
    if (!(rho > 0.0)) throw std::domain_error("laplace_of_measure: rho must be positive");
    double acc = 0.0;
    for (const auto& a : m.atoms) acc += a.mass * std::exp(-rho * a.location);
    double bound = 0.0;
    if (!m.density.empty()) {
        quad::KahanSum<double> s;
        for (std::size_t i = 0; i < m.density.size(); ++i)
            s.add(trapezoid_weight(i, m.density.size()) * std::exp(-rho * (m.x0 + i * m.dx)) *
                  m.density[i]);
        acc += s.value() * m.dx;
        // tail estimate: density continued at its terminal slope decays
        // slower than the exponential only transiently
        bound = 2.0 * m.density.back() * std::exp(-rho * m.x_end()) / rho;
        if (!(bound <= tail_tol))
            throw std::runtime_error("laplace_of_measure: insufficient grid length for rho");
    }
    if (tail_bound) *tail_bound = bound;
    return acc;
}

double laplace_of_measure(const density::StateMeasure& m, double rho, double tail_tol,
                          double* tail_bound) {
    return laplace_of_measure(reduced_measure(m), rho, tail_tol, tail_bound);
}

complex stieltjes_transform(const SampledMeasure& m, complex z) {
    for (const auto& a : m.atoms)
        if (std::abs(z - a.location) < 1e-12)
            throw std::domain_error("stieltjes_transform: z coincides with an atom");
    if (!m.density.empty() && std::abs(z.imag()) < m.dx && z.real() > m.x0 - m.dx &&
        z.real() < m.x_end() + m.dx)
        throw std::domain_error("stieltjes_transform: z on the support within grid resolution");
    complex acc = 0.0;
    for (const auto& a : m.atoms) acc += a.mass / (a.location - z);
    for (std::size_t i = 0; i < m.density.size(); ++i)
        acc += trapezoid_weight(i, m.density.size()) * m.density[i] * m.dx /
               (m.x0 + i * m.dx - z);
    return acc;
}

double stieltjes_invert(const Evaluator& f, double t, const std::vector<double>& eps_schedule,
                        const std::vector<double>& delta_schedule) {
    if (eps_schedule.size() < 2 || delta_schedule.empty())
        throw std::domain_error("stieltjes_invert: need >= 2 epsilons and >= 1 delta");
    std::vector<double> per_delta;
    for (double delta : delta_schedule) {
        std::vector<double> vals;
        for (double eps : eps_schedule) {
            auto integrand = [&](double s) { return f(complex(s, eps)).imag() / pi; };
            vals.push_back(quad::adaptive_simpson<double>(integrand, 0.0, t + delta, 1e-9, 48));
        }
        per_delta.push_back(neville_to_zero_real(eps_schedule, vals));
    }
    const double result = delta_schedule.size() == 1
                              ? per_delta[0]
                              : neville_to_zero_real(delta_schedule, per_delta);
    if (!std::isfinite(result))
        throw std::runtime_error("stieltjes_invert: schedule did not converge");
    return result;
}

complex fourier_of_measure(const SampledMeasure& m, double t) {
    complex acc = 0.0;
    for (const auto& a : m.atoms) acc += a.mass * std::polar(1.0, -t * a.location);
    for (std::size_t i = 0; i < m.density.size(); ++i)
        acc += trapezoid_weight(i, m.density.size()) * m.density[i] * m.dx *
               std::polar(1.0, -t * (m.x0 + i * m.dx));
    return acc;
}

complex stieltjes_to_fourier(const Evaluator& f, double t,
                             const std::vector<double>& eps_schedule, double window_lo,
                             double window_hi) {
    if (eps_schedule.size() < 2)
        throw std::domain_error("stieltjes_to_fourier: need >= 2 epsilons");
    if (!(window_hi > window_lo))
        throw std::domain_error("stieltjes_to_fourier: empty window");
    std::vector<complex> vals;
    for (double eps : eps_schedule) {
        auto integrand = [&](double w) {
            return std::polar(1.0, -t * w) * f(complex(w, eps)).imag() / pi;
        };
        vals.push_back(
            quad::adaptive_simpson<complex>(integrand, window_lo, window_hi, 1e-9, 48));
    }
    return neville_to_zero(eps_schedule, std::move(vals));
}

TransformReport complete_monotonicity_check(const std::function<double(double)>& fn,
                                            const std::vector<double>& beta_grid, int max_order,
                                            double tolerance) {
    const std::size_t n = beta_grid.size();
    if (max_order < 1 || max_order > 10)
        throw std::domain_error("complete_monotonicity_check: max_order must be in [1, 10]");
    if (n < std::size_t(max_order) + 1)
        throw std::domain_error("complete_monotonicity_check: grid shorter than max_order + 1");
    for (std::size_t i = 1; i < n; ++i)
        if (!(beta_grid[i] > beta_grid[i - 1]))
            throw std::domain_error("complete_monotonicity_check: grid must increase strictly");

    std::vector<long double> dd(n);
    long double fmax = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        dd[i] = fn(beta_grid[i]);
        fmax = std::max(fmax, std::abs(dd[i]));
    }
    double h_min = beta_grid[1] - beta_grid[0];
    for (std::size_t i = 1; i + 1 < n; ++i)
        h_min = std::min(h_min, beta_grid[i + 1] - beta_grid[i]);

    TransformReport report;
    const double sign_tol = tolerance;
    long double kfact_hk = 1.0L;
    for (int k = 1; k <= max_order; ++k) {
        for (std::size_t i = 0; i + k < n; ++i)
            dd[i] = (dd[i + 1] - dd[i]) / (long double)(beta_grid[i + k] - beta_grid[i]);
        dd.resize(n - k + 0);
        long double scale = 0.0L;
        for (std::size_t i = 0; i + k < n; ++i) scale = std::max(scale, std::abs(dd[i]));
        kfact_hk *= k * h_min;
        const long double roundoff = std::pow(2.0L, k) * 1.1e-19L * fmax / kfact_hk;
        if (scale > 0.0L && roundoff > sign_tol * scale)
            throw std::runtime_error(
                "complete_monotonicity_check: grid too coarse, roundoff dominates");
        double worst = 0.0;  // most negative normalized (-1)^k dd
        for (std::size_t i = 0; i + k < n; ++i) {
            const long double v = (k % 2 == 0 ? dd[i] : -dd[i]);
            const double normalized = scale > 0.0L ? double(v / scale) : 0.0;
            worst = std::min(worst, normalized);
        }
        report.points.push_back(double(k));
        report.values.push_back(worst);
        report.error_estimates.push_back(scale > 0.0L ? double(roundoff / scale) : 0.0);
        if (worst < -sign_tol) {
            report.pass = false;
            report.notes.push_back("order " + std::to_string(k) + " sign violation");
        }
    }
    return report;
}

}  // namespace oscidos::transforms
