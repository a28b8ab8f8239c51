#include "oscidos/quadrature.hpp"

namespace oscidos::quad {

GaussLegendre::GaussLegendre(int n) {
    nodes.resize(n);
    weights.resize(n);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

const GaussLegendre& gauss_legendre_64() {
    static const GaussLegendre g(64);
    return g;
}

double inv_power_tail(long L, int s) {
    if (L < 1 || s < 2) throw std::domain_error("inv_power_tail: need L >= 1, s >= 2");
    const double a = double(L) + 1.0;
    const double inv = 1.0 / a;
    double p = std::pow(inv, s - 1);  // a^{1-s}
    double tail = p / (s - 1.0);
    p *= inv;  // a^{-s}
    tail += 0.5 * p;
    p *= inv;  // a^{-s-1}
    tail += s * p / 12.0;
    p *= inv * inv;  // a^{-s-3}
    tail -= double(s) * (s + 1.0) * (s + 2.0) * p / 720.0;
    p *= inv * inv;  // a^{-s-5}
    tail += double(s) * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * p / 30240.0;
    return tail;
}

}  // namespace oscidos::quad
