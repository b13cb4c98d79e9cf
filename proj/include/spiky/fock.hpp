#pragma once

// Truncated Fock-basis oracle: quadratures, phase-space translations and
// reflections, density matrices, parity projection and Gaussian dephasing.
// Everything here is computed from operator algebra alone and never touches
// the phase-space grids, so it can serve as ground truth for them.
//
// Conventions: q = sqrt(hbar/2)(a + a+), p = i sqrt(hbar/2)(a+ - a),
// T_xi = exp((i/hbar)(xi_p q - xi_q p)) translates by xi, R_0 = (-1)^n and
// R_x = T_2x R_0. A coherent state centred on (P, Q) has amplitude
// alpha = (Q + i P)/sqrt(2 hbar).

#include <Eigen/Dense>

#include <array>
#include <filesystem>
#include <iosfwd>

#include "spiky/core.hpp"

namespace spiky {

using FockMatrix = Eigen::MatrixXcd;

struct FockOperator {
    int dim = 0;
    double hbar = 0.1;
    FockMatrix m;
};

/// Hermitian, unit-trace, positive semidefinite density operator.
struct DensityMatrix {
    int dim = 0;
    double hbar = 0.1;
    FockMatrix rho;

    DensityMatrix() = default;
    /// Validates: Hermitian to 1e-12, trace 1 +- 1e-10, eigenvalues >= -1e-10.
    DensityMatrix(FockMatrix rho, double hbar);
};

struct Quadratures {
    FockOperator q;
    FockOperator p;
};

/// Position and momentum matrices truncated at N >= 4 levels.
Quadratures ladder_and_quadratures(int N, double hbar);

/// Truncation rule N = ceil(|alpha|^2 + 10|alpha| + 20), |alpha|^2 = |Y|^2/(2 hbar).
int truncation_for(PhasePoint Y, double hbar);

/// Dimension in which the exponential of a translation by xi must be formed
/// for its lowest N levels to be exact: N plus the truncation rule for xi.
/// Throws TruncationError when |xi|^2/(2 hbar) > N.
int working_dimension(int N, Chord xi, double hbar);

/// Matrix exponential of (i/hbar)(xi_p q - xi_q p) with q, p truncated at N.
/// Only the lowest levels are faithful; the top of the basis carries
/// truncation artifacts. Throws TruncationError when |xi|^2/(2 hbar) > N.
FockOperator translation_operator(Chord xi, int N, double hbar);

/// R_x = T_2x R_0 with T truncated at N.
FockOperator reflection_operator(PhasePoint x, int N, double hbar);

/// (-1)^n on N levels.
FockOperator parity_operator(int N, double hbar);

/// Lowest N x N block of the untruncated translation operator, obtained from
/// the exponential in working_dimension(N, xi) levels.
FockOperator translation_block(Chord xi, int N, double hbar);

/// Lowest N x N block of the untruncated reflection operator R_x.
FockOperator reflection_block(PhasePoint x, int N, double hbar);

Eigen::VectorXcd coherent_vector(PhasePoint Y, int N, double hbar);
DensityMatrix coherent_density(PhasePoint Y, int N, double hbar);
/// Normalized |Y> + sign |-Y>; throws DomainError for the zero-norm odd Y = 0.
DensityMatrix cat_density(PhasePoint Y, Parity sign, int N, double hbar);
DensityMatrix number_density(int n, int N, double hbar);
/// weight * a + (1 - weight) * b.
DensityMatrix mix(const DensityMatrix& a, const DensityMatrix& b, double weight);

/// Tr(rho R_x) / (pi hbar). Throws TruncationError when the imaginary
/// residue of the trace exceeds 1e-8.
double wigner_point(const DensityMatrix& rho, PhasePoint x);

/// Chord function Tr(T_xi rho) / (2 pi hbar), i.e. the Fourier transform
/// (1/2 pi hbar) int W(x) exp((i/hbar) x.J xi) dx.
Complex chord_point(const DensityMatrix& rho, Chord xi);

/// <A> = Tr(rho A) for an operator of matching dimension.
Complex expectation(const DensityMatrix& rho, const FockOperator& a);

struct ProjectedDensity {
    DensityMatrix state;
    double probability = 0.0;
};

/// P rho P / Tr(rho P) with P = (1 + sign R_X)/2. The probability is checked
/// against (1 + sign pi hbar W(X))/2 to 1e-8. Throws ImpossibleOutcome when
/// the probability is at or below p_floor and TruncationError when the
/// projected state leaks out of the basis.
ProjectedDensity project_density(const DensityMatrix& rho, PhasePoint X, Parity sign,
                                 double p_floor = 1e-10);

/// int dy K(y) T_y rho T_y+ with K the isotropic Gaussian of per-axis
/// variance hbar c^2 t, discretized on a uniform grid covering 6 sigma.
DensityMatrix dephase_density(const DensityMatrix& rho, double t, double c);

/// Tr rho^2.
double density_purity(const DensityMatrix& rho);

/// Residuals (max modulus on the lowest `block` levels) of the four
/// translation/reflection composition laws:
///   T_a T_b = T_{a+b} e^{-(i/2hbar) a.Jb}
///   T_xi R_x = R_{x+xi/2} e^{(i/hbar) x.J xi}
///   R_x T_xi = R_{x-xi/2} e^{(i/hbar) x.J xi}
///   R_x1 R_x2 = T_{2(x1-x2)} e^{(2i/hbar) x1.J x2}
/// All operators are truncated at `dim`.
std::array<double, 4> affine_group_residuals(PhasePoint x1, PhasePoint x2, Chord xi1, Chord xi2,
                                             int dim, int block, double hbar);

/// `# dim=N, hbar=v` header, then `row,col,re,im` lines.
void write_density(std::ostream& out, const DensityMatrix& rho);
DensityMatrix read_density(std::istream& in);

}  // namespace spiky
