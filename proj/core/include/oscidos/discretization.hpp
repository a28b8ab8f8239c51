#pragma once

#include <iosfwd>
#include <array>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "oscidos/model.hpp"

// Finite-mode lattice model: cube averages over the half-open cubes of the
// (1/N)Z^3 lattice intersecting B(0,N), polarization vectors, the block
// matrices of the discretized quadratic Hamiltonian, the trace and
// determinant lemmas, the ratio formula Z_N and the Riemann sums S_{l,N}.
// Units: hbar = c = m = mu = 1, e^2 = 3 sin(phi) eta.

namespace oscidos::discretization {

struct QuadraticOscillatorSystem {
    Eigen::VectorXd mass_diag;  // strictly positive
    Eigen::MatrixXd coupling;   // A, symmetric
};

struct Mode {
    double omega_bar;           // cube average of |k|
    double chi_bar;             // cube average of the cutoff indicator
    double inv_sqrt_omega_bar;  // cube average of 1/sqrt(|k|)
    Eigen::Vector3d y1, y2;     // cube averages of chi_c u_sigma / sqrt(omega)
    std::array<int, 3> cell{};  // lattice cube [a/N, (a+1)/N) x ...
};

struct DiscreteModeSet {
    int level{0};       // N
    double volume{0.0}; // V = N^{-3}
    model::ModelParams params;
    std::vector<Mode> modes;
};

struct BlockMatrix {
    Eigen::Matrix3d B;
    std::vector<Eigen::Matrix<double, 3, 2>> Bj;
    std::vector<double> s;

    Eigen::MatrixXd assemble() const;  // dense symmetric (2L+3) x (2L+3)
};

// Transverse pair with {u1, u2, k/|k|} orthonormal; u1 = normalize(z x k),
// u2 = k x u1, falling back to ((1,0,0),(0,1,0)) on the z axis.
std::pair<Eigen::Vector3d, Eigen::Vector3d> polarization(const Eigen::Vector3d& k);

// Cube averages by 4^3 tensor Gauss-Legendre; origin-adjacent cubes refine
// dyadically toward 0 (1/sqrt(omega) is integrable but unbounded), cubes
// straddling the cutoff sphere refine 3 levels.  Requires a finite cutoff.
DiscreteModeSet build_mode_set(int N, const model::ModelParams& p);

// Lemma "traceformula": Tr e^{-beta H/hbar} = prod_i (2 sinh(beta/2 sqrt(lambda_i)))^{-1},
// lambda_i the eigenvalues of M^{-1/2} A M^{-1/2}.  Throws on a
// non-positive eigenvalue.
double trace_quadratic(const QuadraticOscillatorSystem& sys, double beta);
double log_trace_quadratic(const QuadraticOscillatorSystem& sys, double beta);

// Second line of the lemma: beta^{-n} det(W)^{-1/2} prod_l det(I + (beta/2 pi l)^2 W)^{-1}
// truncated at l_max with an analytic trace tail.
double log_trace_quadratic_product(const QuadraticOscillatorSystem& sys, double beta,
                                   long l_max);

// Lemma "detformula": det Q = s_1^2 ... s_L^2 det(B - sum_j B_j B_j^T / s_j).
double det_block(const BlockMatrix& q);

// S_{l,N} = (e^2 eta^2 / 2 pi^2) V sum_j sum_sigma ybar ybar^T / (omega_bar (omega_bar^2 + nu_l^2)),
// nu_l = 2 pi l / beta.
Eigen::Matrix3d s_l_discrete(const DiscreteModeSet& modes, long l, double beta);

// Continuum limit (4 eta sin(phi) / (pi nu_l)) arctan(gamma eta / nu_l) I_3.
Eigen::Matrix3d s_l_continuum(long l, double beta, const model::ModelParams& p);

// h_l(gamma) = rho^2/l^2 + (4/pi)(rho/l) sin(phi) arctan(gamma rho / l), the
// l-th product term of Eq. (UVreg).
double h_l_cutoff(long l, double rho, double phi, double gamma_uv);

// Discretized energy-renormalization sum
//   R_N = V (e^2 eta^2 / 4 pi^2) sum_j chi_bar_j / (omega_bar_j^2 (omega_bar_j + eta))
// and its continuum limit (3 eta sin(phi) / pi) ln(1 + gamma).
double renorm_sum(const DiscreteModeSet& modes);
double renorm_continuum(const model::ModelParams& p);

// Block matrix of the discretized Hamiltonian.  B carries the mass
// renormalization I_3 + V (e^2/2 pi^2) sum ybar ybar^T / omega_bar (this is
// what makes Eq. (tradissys) an identity and A positive definite);
// B_j = sqrt(V/2 pi^2) e sqrt(omega_bar_j) (ybar_1j, ybar_2j); s_j = omega_bar_j^2.
BlockMatrix assemble_block_matrix(const DiscreteModeSet& modes);

// Masses (1/eta^2, 1/eta^2, 1/eta^2, 1, ..., 1) plus the assembled block matrix.
QuadraticOscillatorSystem assemble_block_system(const DiscreteModeSet& modes);

// Eq. (tradissys): Z_N = (beta eta)^{-3} e^{beta R_N}
//   prod_l det((1 + eta^2/nu_l^2) I_3 + S_{l,N})^{-1}
// with an analytic trace tail beyond l_max.
double z_n(const DiscreteModeSet& modes, double beta, long l_max);
double log_z_n(const DiscreteModeSet& modes, double beta, long l_max);

// Oracle route: e^{beta R_N} Tr e^{-beta H/hbar} / Tr e^{-beta H_f/hbar}
// through the eigenvalues of the assembled block system (Eq. (tradisfie)
// for the field trace).
double log_z_n_eigen_route(const DiscreteModeSet& modes, double beta);

// CSV serialization: columns j, omega_bar, y1, y2, chi_bar (plus a metadata
// header), 17 significant digits.
void write_mode_set_csv(const DiscreteModeSet& modes, std::ostream& os);
DiscreteModeSet read_mode_set_csv(std::istream& is);

}  // namespace oscidos::discretization
