#include "oscidos/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "oscidos/quadrature.hpp"
#include "oscidos/special.hpp"

namespace oscidos::density {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr complex I(0.0, 1.0);

void check_phi_density(double phi) {
    if (!(phi > 0.0 && phi <= pi / 2.0))
        throw std::domain_error("density: phi must lie in (0, pi/2] (poles at t = 2 pi j for phi = 0)");
}

double lgamma_int(int n) { return std::lgamma(double(n) + 1.0); }

// log(e^a + e^b)
double logaddexp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b > a) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

template <typename T>
std::vector<T> convolve_impl(const std::vector<T>& h, const std::vector<T>& k, double dt) {
    if (h.size() != k.size() || h.empty())
        throw std::invalid_argument("convolve: grids mismatch (need equal-length samples on one grid)");
    const std::size_t n = h.size();
    std::vector<T> out(n, T{});
    for (std::size_t i = 1; i < n; ++i) {
        T acc = 0.5 * (h[0] * k[i] + h[i] * k[0]);
        for (std::size_t m = 1; m < i; ++m) acc += h[m] * k[i - m];
        out[i] = acc * dt;
    }
    return out;
}

}  // namespace

double g_real(double t, double phi) {
    check_phi_density(phi);
    if (!(t >= 0.0)) throw std::domain_error("g_real: t must be nonnegative");
    const complex d = I * std::polar(1.0, -phi);
    if (t == 0.0) return 0.5 * std::sin(phi);
    return 6.0 * special::bernoulli_kernel(d * t).real() / t;
}

complex g_complex(complex z, double phi) {
    check_phi_density(phi);
    if (z == complex(0.0, 0.0)) return 0.5 * std::sin(phi);
    // pole proximity: |z e^{+-i phi} - 2 pi n| for the nearest nonzero n
    for (double sgn : {1.0, -1.0}) {
        const complex zeta = z * std::polar(1.0, sgn * phi);
        const double n = std::round(zeta.real() / (2.0 * pi));
        if (n != 0.0 && std::abs(zeta - 2.0 * pi * n) < 1e-8)
            throw std::runtime_error("g_complex: pole proximity (within 1e-8 of q_j)");
    }
    const complex d = I * std::polar(1.0, -phi);
    return 3.0 * (special::bernoulli_kernel(d * z) + special::bernoulli_kernel(std::conj(d) * z)) / z;
}

double g_sup(double phi, double t_max) {
    check_phi_density(phi);
    const double step = std::min({0.01, 2.0 * pi * std::sin(phi) / 8.0, t_max / 1000.0});
    double m = 0.0;
    for (double t = 0.0; t <= t_max; t += step) m = std::max(m, g_real(t, phi));
    return 1.1 * m;
}

std::vector<double> convolve(const std::vector<double>& h, const std::vector<double>& k,
                             double dt) {
    return convolve_impl(h, k, dt);
}
std::vector<complex> convolve(const std::vector<complex>& h, const std::vector<complex>& k,
                              double dt) {
    return convolve_impl(h, k, dt);
}

StateMeasure rho_density(const model::ModelParams& p, double t_max, double dt, int n_terms,
                         double bound_tol) {
    check_phi_density(p.phi);
    if (!(p.eta > 0.0)) throw std::domain_error("rho_density: eta must be positive");
    if (n_terms < 1) throw std::domain_error("rho_density: n_terms must be >= 1");
    if (!(dt > 0.0) || !(t_max > 8.0 * dt))
        throw std::domain_error("rho_density: need dt > 0 and t_max spanning several grid cells");

    const long M = std::lround(t_max / dt);
    const double tmax = M * dt;

    std::vector<double> g1(M + 1);
    for (long i = 0; i <= M; ++i) g1[i] = g_real(i * dt, p.phi);

    std::vector<double> total(M + 1, 0.0), carry(M + 1, 0.0);
    auto accumulate = [&](const std::vector<double>& term) {
        for (long i = 0; i <= M; ++i) {  // fixed order, compensated
            const double y = term[i] - carry[i];
            const double t = total[i] + y;
            carry[i] = (t - total[i]) - y;
            total[i] = t;
        }
    };
    std::vector<double> scaled = g1;  // g^{*n}/n!
    accumulate(scaled);
    for (int n = 2; n <= n_terms; ++n) {
        scaled = convolve(g1, scaled, dt);
        for (auto& v : scaled) v /= double(n);
        accumulate(scaled);
    }

    // Lemma "anal cont" tail: sum_{n>N} (tmax*||g||)^n/n! / tmax, in logs
    const double x = tmax * g_sup(p.phi, tmax);
    double log_tail = -std::numeric_limits<double>::infinity();
    const double lx = std::log(x);
    for (int n = n_terms + 1; n <= n_terms + 800; ++n) {
        const double lt = n * lx - lgamma_int(n);
        log_tail = logaddexp(log_tail, lt);
        if (double(n) > x && lt < log_tail - 40.0) break;
    }
    const double bound = std::exp(std::min(700.0, log_tail - std::log(tmax)));

    if (bound_tol > 0.0 && !(bound <= bound_tol))
        throw std::runtime_error("rho_density: certified truncation bound exceeds tolerance");

    StateMeasure m;
    m.phi = p.phi;
    m.eta = p.eta;
    m.atom_location = model::t_phi(p.phi) * p.eta / (2.0 * pi);
    m.atom_mass = 1.0;
    m.dt = dt;
    m.density = std::move(total);
    m.n_terms = n_terms;
    m.truncation_bound = bound;
    return m;
}

int default_n_terms(double phi, double t_max) {
    check_phi_density(phi);
    const double x = t_max * g_sup(phi, t_max);
    const double lx = std::log(x);
    for (int n = 1; n <= 500; ++n)
        if (n >= 15 && n * lx - lgamma_int(n) < std::log(1e-10)) return n;
    return 500;
}

double SampledDensity::operator()(double x) const {
    if (x < x0) return 0.0;
    const double u = (x - x0) / dx;
    const auto i = static_cast<long>(u);
    if (i + 1 >= long(values.size()))
        throw std::domain_error("SampledDensity: evaluation beyond the sampled grid");
    const double f = u - double(i);
    return values[i] * (1.0 - f) + values[i + 1] * f;
}

SampledDensity phi_of_omega(const StateMeasure& m) {
    SampledDensity d;
    d.x0 = m.atom_location;
    d.dx = m.eta * m.dt / (2.0 * pi);
    d.values.resize(m.density.size());
    const double scale = 2.0 * pi / m.eta;
    for (std::size_t i = 0; i < m.density.size(); ++i) d.values[i] = scale * m.density[i];
    return d;
}

LorentzLine lorentz_line(int j, const model::ModelParams& p) {
    if (j < 1) throw std::domain_error("lorentz_line: j must be >= 1");
    check_phi_density(p.phi);
    const double omega_phi = model::t_phi(p.phi) * p.eta / (2.0 * pi);
    return LorentzLine{j, omega_phi + j * p.eta * std::cos(p.phi), j * p.eta * std::sin(p.phi),
                       binomial_mass(j)};
}

complex lorentz_profile(int j, const model::ModelParams& p, complex x) {
    check_phi_density(p.phi);
    if (j < 1) throw std::domain_error("lorentz_profile: j must be >= 1");
    const double omega_phi = model::t_phi(p.phi) * p.eta / (2.0 * pi);
    const complex pj = omega_phi + double(j) * p.eta * std::polar(1.0, -p.phi);
    if (std::abs(x - pj) < 1e-12 || std::abs(x - std::conj(pj)) < 1e-12)
        throw std::runtime_error("lorentz_profile: pole proximity");
    return -1.0 / (2.0 * pi * I * (x - pj)) + 1.0 / (2.0 * pi * I * (x - std::conj(pj)));
}

double lorentz_profile(int j, const model::ModelParams& p, double omega) {
    const LorentzLine line = lorentz_line(j, p);
    const double d = omega - line.center;
    return line.half_width / (pi * (d * d + line.half_width * line.half_width));
}

complex lorentz_profile_reduced(int j, double phi, complex z) {
    check_phi_density(phi);
    const complex qj = 2.0 * pi * double(j) * std::polar(1.0, -phi);
    if (std::abs(z - qj) < 1e-12 || std::abs(z - std::conj(qj)) < 1e-12)
        throw std::runtime_error("lorentz_profile_reduced: pole proximity");
    return -1.0 / (2.0 * pi * I * (z - qj)) + 1.0 / (2.0 * pi * I * (z - std::conj(qj)));
}

std::vector<Atom> mu0_atoms(int j_max, double eta) {
    if (j_max < 0) throw std::domain_error("mu0_atoms: j_max must be >= 0");
    std::vector<Atom> atoms;
    atoms.reserve(j_max + 1);
    for (int j = 0; j <= j_max; ++j) atoms.push_back({(j + 1.5) * eta, binomial_mass(j)});
    return atoms;
}

CoefficientTable coefficient_table(int j_max) {
    if (j_max < 1) throw std::domain_error("coefficient_table: j_max must be >= 1");
    CoefficientTable t;
    t.j_max = j_max;
    t.c.resize(j_max);
    t.c_tilde.resize(j_max);
    for (int j = 1; j <= j_max; ++j) {
        t.c[j - 1].assign(j, Rational(0));
        t.c_tilde[j - 1].assign(j, Rational(0));
        t.c[j - 1][0] = Rational(3, j);
        t.c_tilde[j - 1][0] = Rational(3, j);
    }
    for (int n = 2; n <= j_max; ++n) {
        for (int j = n; j <= j_max; ++j) {
            Rational acc = 0, acc_t = 0;
            for (int k = 1; k <= j - n + 1; ++k) {
                acc += Rational(3, k) * t.c[j - k - 1][n - 2];
                acc_t += Rational(3, k) * t.c_tilde[j - k - 1][n - 2];
            }
            t.c[j - 1][n - 1] = acc;
            t.c_tilde[j - 1][n - 1] = -acc_t;
        }
    }
    t.row_sum.resize(j_max);
    t.row_sum_tilde.resize(j_max);
    BigInt fact = 1;
    std::vector<BigInt> factorials(j_max + 1);
    factorials[0] = 1;
    for (int n = 1; n <= j_max; ++n) {
        fact *= n;
        factorials[n] = fact;
    }
    for (int j = 1; j <= j_max; ++j) {
        Rational s = 0, st = 0;
        for (int n = 1; n <= j; ++n) {
            s += t.c[j - 1][n - 1] / Rational(factorials[n]);
            st += t.c_tilde[j - 1][n - 1] / Rational(factorials[n]);
        }
        t.row_sum[j - 1] = s;
        t.row_sum_tilde[j - 1] = st;
    }
    return t;
}

complex density_complex(complex z, double phi, int n_terms, double dt) {
    check_phi_density(phi);
    if (n_terms < 1) throw std::domain_error("density_complex: n_terms must be >= 1");
    const double s = std::abs(z);
    if (s == 0.0) return 0.5 * std::sin(phi);
    const double chi = std::arg(z);
    if (s >= 2.0 * pi * (1.0 - 1e-12) && std::abs(std::abs(chi) - phi) < 1e-9)
        throw std::domain_error("density_complex: z lies on a cut ray arg = +-phi, |z| >= 2 pi");

    const long M = std::max(16L, std::lround(std::ceil(s / dt)));
    const double ds = s / double(M);
    const complex dir = std::polar(1.0, chi);

    std::vector<complex> g1(M + 1);
    for (long i = 0; i <= M; ++i) g1[i] = g_complex(double(i) * ds * dir, phi);

    complex result = g1[M];
    std::vector<complex> scaled = g1;
    for (int n = 2; n <= n_terms; ++n) {
        scaled = convolve(g1, scaled, ds);
        const complex f = dir / double(n);
        for (auto& v : scaled) v *= f;
        result += scaled[M];
    }
    return result;
}

complex extrapolate_residue(const std::function<complex(complex)>& fn, complex pole,
                            complex direction, const std::vector<double>& radii) {
    if (radii.size() < 3)
        throw std::domain_error("extrapolate_residue: need at least 3 radii");
    const complex dir = direction / std::abs(direction);

    auto fit3 = [&](std::size_t off) {
        // solve a + b r ln r + c r = f(r) through three radii
        double A[3][3];
        complex rhs[3];
        for (int i = 0; i < 3; ++i) {
            const double r = radii[off + i];
            const complex zr = pole + r * dir;
            rhs[i] = (zr - pole) * fn(zr);
            A[i][0] = 1.0;
            A[i][1] = r * std::log(r);
            A[i][2] = r;
        }
        // Gaussian elimination, partial pivoting
        int idx[3] = {0, 1, 2};
        for (int col = 0; col < 2; ++col) {
            int p = col;
            for (int r = col + 1; r < 3; ++r)
                if (std::abs(A[idx[r]][col]) > std::abs(A[idx[p]][col])) p = r;
            std::swap(idx[col], idx[p]);
            for (int r = col + 1; r < 3; ++r) {
                const double f = A[idx[r]][col] / A[idx[col]][col];
                for (int c = col; c < 3; ++c) A[idx[r]][c] -= f * A[idx[col]][c];
                rhs[idx[r]] -= f * rhs[idx[col]];
            }
        }
        complex x[3];
        for (int r = 2; r >= 0; --r) {
            complex acc = rhs[idx[r]];
            for (int c = r + 1; c < 3; ++c) acc -= A[idx[r]][c] * x[c];
            x[r] = acc / A[idx[r]][r];
        }
        return x[0];
    };

    const complex a_first = fit3(0);
    if (radii.size() == 3) return a_first;
    const complex a_last = fit3(radii.size() - 3);
    if (std::abs(a_last - a_first) > 0.25 * std::abs(a_last))
        throw std::runtime_error("extrapolate_residue: schedule not convergent");
    return a_last;
}

complex residue_probe(int j, double phi, int n_terms, const std::vector<double>& radii,
                      double dt) {
    check_phi_density(phi);
    if (j < 1 || j > n_terms)
        throw std::domain_error("residue_probe: need 1 <= j <= n_terms (c_{jn} = 0 for n > j)");
    const complex qj = 2.0 * pi * double(j) * std::polar(1.0, -phi);
    const complex dir = I * std::polar(1.0, -phi);  // perpendicular, into the cone
    auto fn = [&](complex z) { return density_complex(z, phi, n_terms, dt); };
    return extrapolate_residue(fn, qj, dir, radii);
}

complex jump_g2(double s, double phi) {
    check_phi_density(phi);
    const long j = long(std::floor(s / (2.0 * pi)));
    if (j < 1 || s <= 2.0 * pi * j || s >= 2.0 * pi * (j + 1))
        throw std::domain_error("jump_g2: need 2 pi j < s < 2 pi (j+1) with j >= 1");
    const complex dir = std::polar(1.0, -phi);
    complex acc = 0.0;
    for (long l = 1; l <= j; ++l) acc += 6.0 / double(l) * g_complex((s - 2.0 * pi * l) * dir, phi);
    return acc;
}

namespace {

// g*g(s e^{i chi}) by panelled 64-point Gauss-Legendre along the segment,
// panel edges at the near-pole arclengths.
complex g2_on_ray(double s, double chi, double phi) {
    std::vector<double> edges{0.0, s};
    const long j = long(std::floor(s / (2.0 * pi)));
    for (long l = 1; l <= j + 1; ++l) {
        for (double e : {2.0 * pi * l * std::cos(chi + phi), s - 2.0 * pi * l * std::cos(chi + phi)})
            if (e > 1e-9 && e < s - 1e-9) edges.push_back(e);
    }
    std::sort(edges.begin(), edges.end());
    const complex dir = std::polar(1.0, chi);
    auto f = [&](complex sigma) {
        return g_complex(sigma * dir, phi) * g_complex((s - sigma) * dir, phi);
    };
    complex acc = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        acc += quad::gl64_adaptive(f, edges[i], edges[i + 1], 1e-11, 14);
    return acc * dir;
}

complex neville_to_zero(const std::vector<double>& x, std::vector<complex> y) {
    for (std::size_t level = 1; level < x.size(); ++level)
        for (std::size_t i = 0; i + level < x.size(); ++i)
            y[i] = (x[i + level] * y[i] - x[i] * y[i + 1]) / (x[i + level] - x[i]);
    return y[0];
}

}  // namespace

complex jump_g2_two_sided(double s, double phi, const std::vector<double>& eps_schedule) {
    check_phi_density(phi);
    if (eps_schedule.size() < 2)
        throw std::domain_error("jump_g2_two_sided: need at least 2 angles");
    std::vector<complex> jumps;
    for (double eps : eps_schedule)
        jumps.push_back(g2_on_ray(s, -phi + eps, phi) - g2_on_ray(s, -phi - eps, phi));
    return neville_to_zero(eps_schedule, std::move(jumps));
}

PeakShift thermal_peak_shift_lorentz(int j, const model::ModelParams& p, double beta) {
    const LorentzLine line = lorentz_line(j, p);
    const double gamma_j = 2.0 * line.half_width;
    if (!(beta > 0.0)) throw std::domain_error("thermal_peak_shift: beta must be positive");
    if (!(2.0 / beta > gamma_j))
        throw std::domain_error("thermal_peak_shift: requires 2T > gamma_j (beta gamma_j < 2)");
    const double u = 0.5 * beta * gamma_j;
    PeakShift out;
    out.exact = (-1.0 + std::sqrt(1.0 - u * u)) / beta;

    auto obj = [&](double omega) {
        const double d = omega - line.center;
        return -beta * omega - std::log(d * d + line.half_width * line.half_width);
    };
    double a = line.center - gamma_j, b = line.center;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = obj(x1), f2 = obj(x2);
    for (int it = 0; it < 200; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = obj(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = obj(x1);
        }
    }
    out.numeric = 0.5 * (a + b) - line.center;
    return out;
}

double thermal_peak_shift_measure(int j, const model::ModelParams& p, double beta,
                                  const StateMeasure& m) {
    const LorentzLine line = lorentz_line(j, p);
    const double gamma_j = 2.0 * line.half_width;
    if (!(2.0 / beta > gamma_j))
        throw std::domain_error("thermal_peak_shift: requires 2T > gamma_j (beta gamma_j < 2)");
    const SampledDensity d = phi_of_omega(m);
    const long lo = std::max(1L, std::lround((line.center - 2.0 * gamma_j - d.x0) / d.dx));
    const long hi = std::min(long(d.values.size()) - 2,
                             std::lround((line.center + gamma_j - d.x0) / d.dx));
    if (lo >= hi) throw std::domain_error("thermal_peak_shift: measure grid does not cover line");
    auto val = [&](long i) {
        return std::exp(-beta * (d.x0 + i * d.dx)) * d.values[i];
    };
    long best = lo;
    double fbest = val(lo);
    for (long i = lo + 1; i <= hi; ++i) {
        const double f = val(i);
        if (f > fbest) {
            fbest = f;
            best = i;
        }
    }
    // parabolic refinement through the three nodes around the max
    const double fm = val(best - 1), f0 = fbest, fp = val(best + 1);
    const double denom = fm - 2.0 * f0 + fp;
    double offset = 0.0;
    if (denom < 0.0) offset = 0.5 * (fm - fp) / denom;
    return d.x0 + (best + offset) * d.dx - line.center;
}

}  // namespace oscidos::density
