#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

// Shared scalar quadrature and summation kernels.

namespace oscidos::quad {

// Compensated (Kahan) accumulator; fixed accumulation order is relied on
// for deterministic output.
template <typename T>
struct KahanSum {
    T sum{};
    T carry{};

    void add(T x) {
        T y = x - carry;
        T t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    T value() const { return sum; }
};

// Gauss-Legendre nodes/weights on [-1, 1], Newton iteration on P_n.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(int n);
};

const GaussLegendre& gauss_legendre_64();

// Integrate f along the straight segment [a, b] in the complex plane with a
// single 64-point panel.
template <typename F>
std::complex<double> gl64_segment(F&& f, std::complex<double> a, std::complex<double> b) {
    const GaussLegendre& g = gauss_legendre_64();
    const std::complex<double> mid = 0.5 * (a + b);
    const std::complex<double> half = 0.5 * (b - a);
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        acc += g.weights[i] * f(mid + g.nodes[i] * half);
    return acc * half;
}

// 64-point panel with recursive bisection while the two-half refinement
// disagrees with the single panel beyond tol.
template <typename F>
std::complex<double> gl64_adaptive(F&& f, std::complex<double> a, std::complex<double> b,
                                   double tol, int max_depth = 12) {
    std::complex<double> whole = gl64_segment(f, a, b);
    struct Rec {
        F& f;
        double tol;
        std::complex<double> run(std::complex<double> a, std::complex<double> b,
                                 std::complex<double> whole, double tol, int depth) {
            std::complex<double> mid = 0.5 * (a + b);
            std::complex<double> left = gl64_segment(f, a, mid);
            std::complex<double> right = gl64_segment(f, mid, b);
            if (std::abs(left + right - whole) <= tol || depth <= 0) return left + right;
            return run(a, mid, left, 0.5 * tol, depth - 1) +
                   run(mid, b, right, 0.5 * tol, depth - 1);
        }
    } rec{f, tol};
    return rec.run(a, b, whole, tol, max_depth);
}

// Adaptive Simpson for real- or complex-valued integrands on a real
// interval.  Throws on refinement exhaustion when the local error estimate
// stays above tolerance.
template <typename T, typename F>
T adaptive_simpson(F&& f, double a, double b, double tol, int max_depth) {
    auto simpson = [&](double x0, double x2, T f0, T f1, T f2) {
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2);
    };
    struct Frame {
        F& f;
        int max_depth;
        T run(double a, double b, T fa, T fm, T fb, T whole, double tol, int depth) {
            double m = 0.5 * (a + b);
            double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            T flm = f(lm), frm = f(rm);
            T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            T delta = left + right - whole;
            if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
            if (depth <= 0)
                throw std::runtime_error("adaptive_simpson: refinement limit exhausted");
            return run(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
                   run(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
        }
    } frame{f, max_depth};
    T fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
    T whole = simpson(a, b, fa, fm, fb);
    return frame.run(a, b, fa, fm, fb, whole, tol, max_depth);
}

// sum_{l > L} l^{-s} by Euler-Maclaurin; accurate to ~1e-16 relative for
// L >= 20, s in [2, 10].
double inv_power_tail(long L, int s);

}  // namespace oscidos::quad
