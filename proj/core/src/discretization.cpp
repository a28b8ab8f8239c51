#include "oscidos/discretization.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "oscidos/quadrature.hpp"

namespace oscidos::discretization {

namespace {

constexpr double pi = 3.14159265358979323846;

double e_squared(const model::ModelParams& p) { return 3.0 * std::sin(p.phi) * p.eta; }

double cutoff_radius(const model::ModelParams& p) {
    if (p.cutoff_removed())
        throw std::domain_error("discretization: requires a finite UV cutoff gamma");
    return p.gamma_uv * p.eta;
}

// ln(2 sinh x) for x > 0
double log_2sinh(double x) { return x + std::log1p(-std::exp(-2.0 * x)); }

struct CubeAccumulator {
    double omega = 0.0;
    double chi = 0.0;
    double inv_sqrt = 0.0;
    Eigen::Vector3d y1 = Eigen::Vector3d::Zero();
    Eigen::Vector3d y2 = Eigen::Vector3d::Zero();
};

struct CubeIntegrator {
    double cutoff;
    // 4-point Gauss-Legendre nodes/weights on [0, 1]
    static constexpr double nodes[4] = {0.06943184420297371, 0.33000947820757187,
                                        0.66999052179242813, 0.93056815579702629};
    static constexpr double wts[4] = {0.17392742256872693, 0.32607257743127307,
                                      0.32607257743127307, 0.17392742256872693};

    bool touches_origin(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi) const {
        return lo.x() <= 0 && hi.x() >= 0 && lo.y() <= 0 && hi.y() >= 0 && lo.z() <= 0 &&
               hi.z() >= 0;
    }
    bool straddles_cutoff(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi) const {
        double rmin2 = 0.0, rmax2 = 0.0;
        for (int d = 0; d < 3; ++d) {
            const double a = lo[d], b = hi[d];
            const double m = (a > 0) ? a : ((b < 0) ? -b : 0.0);
            const double x = std::max(std::abs(a), std::abs(b));
            rmin2 += m * m;
            rmax2 += x * x;
        }
        return rmin2 < cutoff * cutoff && cutoff * cutoff < rmax2;
    }

    void gauss_cell(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi, double weight,
                    CubeAccumulator& acc) const {
        const Eigen::Vector3d d = hi - lo;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c) {
                    const Eigen::Vector3d k(lo.x() + nodes[a] * d.x(), lo.y() + nodes[b] * d.y(),
                                            lo.z() + nodes[c] * d.z());
                    const double w = weight * wts[a] * wts[b] * wts[c];
                    const double r = k.norm();
                    const double is = 1.0 / std::sqrt(r);
                    acc.omega += w * r;
                    acc.inv_sqrt += w * is;
                    if (r < cutoff) {
                        acc.chi += w;
                        auto [u1, u2] = polarization(k);
                        acc.y1 += (w * is) * u1;
                        acc.y2 += (w * is) * u2;
                    }
                }
    }

    void integrate(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi, double weight,
                   CubeAccumulator& acc, int origin_depth, int straddle_depth) const {
        const bool origin = touches_origin(lo, hi);
        const bool straddle = straddles_cutoff(lo, hi);
        if ((origin && origin_depth > 0) || (straddle && straddle_depth > 0)) {
            const Eigen::Vector3d mid = 0.5 * (lo + hi);
            for (int oct = 0; oct < 8; ++oct) {
                Eigen::Vector3d l = lo, h = hi;
                for (int d = 0; d < 3; ++d) {
                    if (oct & (1 << d))
                        l[d] = mid[d];
                    else
                        h[d] = mid[d];
                }
                integrate(l, h, weight / 8.0, acc, origin ? origin_depth - 1 : 0,
                          straddle ? straddle_depth - 1 : 0);
            }
            return;
        }
        gauss_cell(lo, hi, weight, acc);
    }
};

}  // namespace

std::pair<Eigen::Vector3d, Eigen::Vector3d> polarization(const Eigen::Vector3d& k) {
    const double norm = k.norm();
    if (!(norm > 0.0)) throw std::domain_error("polarization: k must be nonzero");
    const Eigen::Vector3d khat = k / norm;
    const Eigen::Vector3d zxk(-khat.y(), khat.x(), 0.0);  // z x khat
    const double s = zxk.norm();
    if (s < 1e-9) return {Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0)};
    const Eigen::Vector3d u1 = zxk / s;
    return {u1, khat.cross(u1)};
}

DiscreteModeSet build_mode_set(int N, const model::ModelParams& p) {
    model::validate(p);
    if (N < 1) throw std::domain_error("build_mode_set: N must be >= 1");
    const double cutoff = cutoff_radius(p);
    const double expected = 4.2 * std::pow(double(N), 6.0);
    if (expected * sizeof(Mode) > 1.5e9)
        throw std::runtime_error("build_mode_set: memory budget exceeded (N too large)");

    DiscreteModeSet set;
    set.level = N;
    set.volume = std::pow(double(N), -3.0);
    set.params = p;
    set.modes.reserve(std::size_t(expected));

    CubeIntegrator integ{cutoff};
    const double h = 1.0 / double(N);
    const long span = long(N) * long(N);  // |a| <= N^2 covers the ball of radius N
    for (long a = -span - 1; a <= span; ++a)
        for (long b = -span - 1; b <= span; ++b)
            for (long c = -span - 1; c <= span; ++c) {
                const Eigen::Vector3d lo(a * h, b * h, c * h);
                const Eigen::Vector3d hi((a + 1) * h, (b + 1) * h, (c + 1) * h);
                double dist2 = 0.0;
                for (int d = 0; d < 3; ++d) {
                    const double m =
                        (lo[d] > 0) ? lo[d] : ((hi[d] < 0) ? -hi[d] : 0.0);
                    dist2 += m * m;
                }
                if (dist2 >= double(N) * double(N)) continue;
                CubeAccumulator acc;
                integ.integrate(lo, hi, 1.0, acc, 24, 3);
                Mode m;
                m.omega_bar = acc.omega;
                m.chi_bar = acc.chi;
                m.inv_sqrt_omega_bar = acc.inv_sqrt;
                m.y1 = acc.y1;
                m.y2 = acc.y2;
                m.cell = {int(a), int(b), int(c)};
                set.modes.push_back(m);
            }
    return set;
}

Eigen::MatrixXd BlockMatrix::assemble() const {
    const long L = long(Bj.size());
    if (s.size() != Bj.size()) throw std::invalid_argument("BlockMatrix: |s| != |Bj|");
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(2 * L + 3, 2 * L + 3);
    Q.topLeftCorner<3, 3>() = B;
    for (long j = 0; j < L; ++j) {
        Q.block<3, 2>(0, 3 + 2 * j) = Bj[j];
        Q.block<2, 3>(3 + 2 * j, 0) = Bj[j].transpose();
        Q(3 + 2 * j, 3 + 2 * j) = s[j];
        Q(4 + 2 * j, 4 + 2 * j) = s[j];
    }
    return Q;
}

double det_block(const BlockMatrix& q) {
    Eigen::Matrix3d schur = q.B;
    double factor = 1.0;
    for (std::size_t j = 0; j < q.s.size(); ++j) {
        if (q.s[j] == 0.0) throw std::domain_error("det_block: s_j = 0");
        schur -= q.Bj[j] * q.Bj[j].transpose() / q.s[j];
        factor *= q.s[j] * q.s[j];
    }
    return factor * schur.determinant();
}

double log_trace_quadratic(const QuadraticOscillatorSystem& sys, double beta) {
    const long n = sys.mass_diag.size();
    if (sys.coupling.rows() != n || sys.coupling.cols() != n)
        throw std::invalid_argument("trace_quadratic: dimension mismatch");
    if ((sys.mass_diag.array() <= 0.0).any())
        throw std::domain_error("trace_quadratic: masses must be positive");
    if (!(beta > 0.0)) throw std::domain_error("trace_quadratic: beta must be positive");
    const Eigen::VectorXd mi = sys.mass_diag.array().rsqrt();
    const Eigen::MatrixXd w = mi.asDiagonal() * sys.coupling * mi.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (w + w.transpose()),
                                                      Eigen::EigenvaluesOnly);
    double acc = 0.0;
    for (long i = 0; i < n; ++i) {
        const double lambda = es.eigenvalues()[i];
        if (!(lambda > 0.0))
            throw std::runtime_error("trace_quadratic: non-positive eigenvalue of M^{-1/2}AM^{-1/2}");
        acc -= log_2sinh(0.5 * beta * std::sqrt(lambda));
    }
    return acc;
}

double trace_quadratic(const QuadraticOscillatorSystem& sys, double beta) {
    return std::exp(log_trace_quadratic(sys, beta));
}

double log_trace_quadratic_product(const QuadraticOscillatorSystem& sys, double beta,
                                   long l_max) {
    const long n = sys.mass_diag.size();
    if (l_max < 1) throw std::domain_error("trace_quadratic_product: l_max must be >= 1");
    const Eigen::VectorXd mi = sys.mass_diag.array().rsqrt();
    const Eigen::MatrixXd w0 = mi.asDiagonal() * sys.coupling * mi.asDiagonal();
    const Eigen::MatrixXd w = 0.5 * (w0 + w0.transpose());
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);

    const double u1 = std::pow(beta / (2.0 * pi * (l_max + 1)), 2.0);
    if (w.norm() * u1 > 0.8)
        throw std::runtime_error("trace_quadratic_product: l_max too small for the trace tail");

    double acc = -double(n) * std::log(beta);
    const double logdet_w = Eigen::PartialPivLU<Eigen::MatrixXd>(w).matrixLU().diagonal().array()
                                .abs().log().sum();
    acc -= 0.5 * logdet_w;
    for (long l = 1; l <= l_max; ++l) {
        const double u = std::pow(beta / (2.0 * pi * l), 2.0);
        acc -= std::log((id + u * w).determinant());
    }
    const double t1 = w.trace();
    const double t2 = (w * w).trace();
    const double t3 = (w * w * w).trace();
    const double b2 = std::pow(beta / (2.0 * pi), 2.0);
    acc -= t1 * b2 * quad::inv_power_tail(l_max, 2) -
           0.5 * t2 * b2 * b2 * quad::inv_power_tail(l_max, 4) +
           t3 / 3.0 * b2 * b2 * b2 * quad::inv_power_tail(l_max, 6);
    return acc;
}

Eigen::Matrix3d s_l_discrete(const DiscreteModeSet& set, long l, double beta) {
    if (l < 1) throw std::domain_error("s_l_discrete: l must be >= 1");
    if (!(beta > 0.0)) throw std::domain_error("s_l_discrete: beta must be positive");
    const double nu2 = std::pow(2.0 * pi * l / beta, 2.0);
    const double pref =
        e_squared(set.params) * set.params.eta * set.params.eta / (2.0 * pi * pi) * set.volume;
    Eigen::Matrix3d acc = Eigen::Matrix3d::Zero();
    for (const Mode& m : set.modes) {
        if (m.chi_bar == 0.0) continue;
        const double d = m.omega_bar * (m.omega_bar * m.omega_bar + nu2);
        acc += (m.y1 * m.y1.transpose() + m.y2 * m.y2.transpose()) / d;
    }
    return pref * acc;
}

Eigen::Matrix3d s_l_continuum(long l, double beta, const model::ModelParams& p) {
    if (l < 1) throw std::domain_error("s_l_continuum: l must be >= 1");
    const double nu = 2.0 * pi * l / beta;
    const double v =
        4.0 * p.eta * std::sin(p.phi) / (pi * nu) * std::atan(cutoff_radius(p) / nu);
    return v * Eigen::Matrix3d::Identity();
}

double h_l_cutoff(long l, double rho, double phi, double gamma_uv) {
    const double x = rho / double(l);
    return x * x + 4.0 / pi * x * std::sin(phi) * std::atan(gamma_uv * x);
}

double renorm_sum(const DiscreteModeSet& set) {
    const double eta = set.params.eta;
    const double pref = e_squared(set.params) * eta * eta / (4.0 * pi * pi) * set.volume;
    quad::KahanSum<double> acc;
    for (const Mode& m : set.modes) {
        if (m.chi_bar == 0.0) continue;
        acc.add(m.chi_bar / (m.omega_bar * m.omega_bar * (m.omega_bar + eta)));
    }
    return pref * acc.value();
}

double renorm_continuum(const model::ModelParams& p) {
    return 3.0 * p.eta * std::sin(p.phi) / pi * std::log1p(p.gamma_uv);
}

BlockMatrix assemble_block_matrix(const DiscreteModeSet& set) {
    const double e = std::sqrt(e_squared(set.params));
    const double v_half = std::sqrt(set.volume / (2.0 * pi * pi));
    BlockMatrix q;
    q.B = Eigen::Matrix3d::Identity();
    for (const Mode& m : set.modes) {
        q.B += set.volume * e * e / (2.0 * pi * pi) / m.omega_bar *
               (m.y1 * m.y1.transpose() + m.y2 * m.y2.transpose());
        Eigen::Matrix<double, 3, 2> bj;
        bj.col(0) = v_half * e * std::sqrt(m.omega_bar) * m.y1;
        bj.col(1) = v_half * e * std::sqrt(m.omega_bar) * m.y2;
        q.Bj.push_back(bj);
        q.s.push_back(m.omega_bar * m.omega_bar);
    }
    return q;
}

QuadraticOscillatorSystem assemble_block_system(const DiscreteModeSet& set) {
    const long L = long(set.modes.size());
    QuadraticOscillatorSystem sys;
    sys.mass_diag = Eigen::VectorXd::Ones(2 * L + 3);
    sys.mass_diag.head<3>().setConstant(1.0 / (set.params.eta * set.params.eta));
    sys.coupling = assemble_block_matrix(set).assemble();
    return sys;
}

double log_z_n(const DiscreteModeSet& set, double beta, long l_max) {
    if (!(beta > 0.0)) throw std::domain_error("z_n: beta must be positive");
    if (l_max < 1) throw std::domain_error("z_n: l_max must be >= 1");
    const double eta = set.params.eta;
    const double c = e_squared(set.params) * eta * eta / (2.0 * pi * pi) * set.volume;

    Eigen::Matrix3d x2 = Eigen::Matrix3d::Zero(), x4 = Eigen::Matrix3d::Zero(),
                    x6 = Eigen::Matrix3d::Zero();
    double omega_max = 0.0;
    for (const Mode& m : set.modes) {
        if (m.chi_bar == 0.0) continue;
        const Eigen::Matrix3d y = m.y1 * m.y1.transpose() + m.y2 * m.y2.transpose();
        x2 += y / m.omega_bar;
        x4 += y * m.omega_bar;
        x6 += y * std::pow(m.omega_bar, 3.0);
        omega_max = std::max(omega_max, m.omega_bar);
    }
    x2 *= c;
    x4 *= c;
    x6 *= c;
    const Eigen::Matrix3d p = eta * eta * Eigen::Matrix3d::Identity() + x2;

    const double b2 = std::pow(beta / (2.0 * pi), 2.0);
    const double u_next = b2 / double((l_max + 1) * (l_max + 1));
    if (omega_max * omega_max * u_next > 0.8 || p.norm() * u_next > 0.5)
        throw std::runtime_error("z_n: l_max too small for the trace tail");

    quad::KahanSum<double> acc;
    const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
    for (long l = 1; l <= l_max; ++l) {
        const double u = b2 / double(l * l);
        const Eigen::Matrix3d d = (1.0 + eta * eta * u) * id + s_l_discrete(set, l, beta);
        acc.add(std::log(d.determinant()));
    }
    const double a1 = p.trace();
    const double a2 = x4.trace() + 0.5 * (p * p).trace();
    const double a3 = x6.trace() + (p * x4).trace() + (p * p * p).trace() / 3.0;
    const double tail = a1 * b2 * quad::inv_power_tail(l_max, 2) -
                        a2 * b2 * b2 * quad::inv_power_tail(l_max, 4) +
                        a3 * b2 * b2 * b2 * quad::inv_power_tail(l_max, 6);

    return -3.0 * std::log(beta * eta) + beta * renorm_sum(set) - acc.value() - tail;
}

double z_n(const DiscreteModeSet& set, double beta, long l_max) {
    return std::exp(log_z_n(set, beta, l_max));
}

double log_z_n_eigen_route(const DiscreteModeSet& set, double beta) {
    const QuadraticOscillatorSystem sys = assemble_block_system(set);
    double acc = log_trace_quadratic(sys, beta) + beta * renorm_sum(set);
    for (const Mode& m : set.modes) acc += 2.0 * log_2sinh(0.5 * beta * m.omega_bar);
    return acc;
}

void write_mode_set_csv(const DiscreteModeSet& set, std::ostream& os) {
    os.precision(17);
    os << "# oscidos mode set level=" << set.level << " volume=" << set.volume
       << " phi=" << set.params.phi << " eta=" << set.params.eta
       << " gamma=" << set.params.gamma_uv << "\n";
    os << "j,omega_bar,y1x,y1y,y1z,y2x,y2y,y2z,chi_bar\n";
    for (std::size_t j = 0; j < set.modes.size(); ++j) {
        const Mode& m = set.modes[j];
        os << j << ',' << m.omega_bar << ',' << m.y1.x() << ',' << m.y1.y() << ',' << m.y1.z()
           << ',' << m.y2.x() << ',' << m.y2.y() << ',' << m.y2.z() << ',' << m.chi_bar << "\n";
    }
}

DiscreteModeSet read_mode_set_csv(std::istream& is) {
    DiscreteModeSet set;
    std::string line;
    if (!std::getline(is, line) || line.rfind("# oscidos mode set", 0) != 0)
        throw std::runtime_error("read_mode_set_csv: missing metadata header");
    std::istringstream meta(line);
    std::string tok;
    while (meta >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        const double val = std::stod(tok.substr(eq + 1));
        if (key == "level") set.level = int(val);
        else if (key == "volume") set.volume = val;
        else if (key == "phi") set.params.phi = val;
        else if (key == "eta") set.params.eta = val;
        else if (key == "gamma") set.params.gamma_uv = val;
    }
    std::getline(is, line);  // column header
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        double vals[9];
        for (int i = 0; i < 9; ++i) {
            if (!std::getline(row, cell, ',')) throw std::runtime_error("read_mode_set_csv: short row");
            vals[i] = std::stod(cell);
        }
        Mode m;
        m.omega_bar = vals[1];
        m.y1 = Eigen::Vector3d(vals[2], vals[3], vals[4]);
        m.y2 = Eigen::Vector3d(vals[5], vals[6], vals[7]);
        m.chi_bar = vals[8];
        m.inv_sqrt_omega_bar = 0.0;  // not serialized
        set.modes.push_back(m);
    }
    return set;
}

}  // namespace oscidos::discretization
