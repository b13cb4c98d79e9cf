#include "spiky/fock.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "spiky/io.hpp"

namespace spiky {

namespace {

constexpr Complex kI{0.0, 1.0};

double amplitude2(Chord xi, double hbar) { return xi.norm2() / (2.0 * hbar); }

void require_dim(int N) {
    if (N < 4) throw DomainError("Fock truncation must be at least 4 levels");
}

FockMatrix generator(Chord xi, int N, double hbar) {
    // (i/hbar)(xi_p q - xi_q p) = beta a+ - conj(beta) a, beta = (xi_q + i xi_p)/sqrt(2 hbar).
    const Complex beta = Complex(xi.q, xi.p) / std::sqrt(2.0 * hbar);
    FockMatrix g = FockMatrix::Zero(N, N);
    for (int n = 1; n < N; ++n) {
        const double s = std::sqrt(static_cast<double>(n));
        g(n, n - 1) = beta * s;
        g(n - 1, n) = -std::conj(beta) * s;
    }
    return g;
}

FockMatrix exp_translation(Chord xi, int dim, double hbar) {
    return generator(xi, dim, hbar).exp();
}

Eigen::VectorXd parity_diagonal(int N) {
    Eigen::VectorXd d(N);
    for (int n = 0; n < N; ++n) d(n) = (n % 2 == 0) ? 1.0 : -1.0;
    return d;
}

void check_hbar(double hbar) {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("hbar must be positive");
}

FockMatrix hermitize(const FockMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

DensityMatrix::DensityMatrix(FockMatrix r, double h) : dim(static_cast<int>(r.rows())), hbar(h), rho(std::move(r)) {
    check_hbar(hbar);
    if (rho.rows() != rho.cols()) throw DomainError("density matrix must be square");
    if (!rho.allFinite()) throw DomainError("density matrix has non-finite entries");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw DomainError("density matrix is not Hermitian");
    const double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > 1e-10) {
        std::ostringstream msg;
        msg << "density matrix trace " << tr << " differs from 1";
        throw DomainError(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<FockMatrix> eig(rho, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10) throw DomainError("density matrix is not positive");
}

Quadratures ladder_and_quadratures(int N, double hbar) {
    require_dim(N);
    check_hbar(hbar);
    FockMatrix a = FockMatrix::Zero(N, N);
    for (int n = 1; n < N; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    const double s = std::sqrt(hbar / 2.0);
    Quadratures out;
    out.q = {N, hbar, s * (a + a.adjoint())};
    out.p = {N, hbar, kI * s * (a.adjoint() - a)};
    return out;
}

int truncation_for(PhasePoint Y, double hbar) {
    const double a2 = amplitude2(as_chord(Y), hbar);
    return static_cast<int>(std::ceil(a2 + 10.0 * std::sqrt(a2) + 20.0));
}

int working_dimension(int N, Chord xi, double hbar) {
    const double b2 = amplitude2(xi, hbar);
    if (b2 > N) {
        std::ostringstream msg;
        msg << "translation |xi|^2/(2 hbar) = " << b2 << " exceeds truncation N = " << N;
        throw TruncationError(msg.str());
    }
    return N + static_cast<int>(std::ceil(b2 + 10.0 * std::sqrt(b2) + 20.0));
}

FockOperator translation_operator(Chord xi, int N, double hbar) {
    require_dim(N);
    check_hbar(hbar);
    working_dimension(N, xi, hbar);
    return {N, hbar, exp_translation(xi, N, hbar)};
}

FockOperator parity_operator(int N, double hbar) {
    require_dim(N);
    return {N, hbar, parity_diagonal(N).cast<Complex>().asDiagonal()};
}

FockOperator reflection_operator(PhasePoint x, int N, double hbar) {
    FockOperator t = translation_operator(2.0 * as_chord(x), N, hbar);
    t.m = t.m * parity_diagonal(N).cast<Complex>().asDiagonal();
    return t;
}

FockOperator translation_block(Chord xi, int N, double hbar) {
    require_dim(N);
    check_hbar(hbar);
    const int m = working_dimension(N, xi, hbar);
    return {N, hbar, exp_translation(xi, m, hbar).topLeftCorner(N, N)};
}

FockOperator reflection_block(PhasePoint x, int N, double hbar) {
    FockOperator t = translation_block(2.0 * as_chord(x), N, hbar);
    t.m = t.m * parity_diagonal(N).cast<Complex>().asDiagonal();
    return t;
}

Eigen::VectorXcd coherent_vector(PhasePoint Y, int N, double hbar) {
    require_dim(N);
    check_hbar(hbar);
    const Complex alpha = Complex(Y.q, Y.p) / std::sqrt(2.0 * hbar);
    Eigen::VectorXcd v(N);
    v(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < N; ++n) v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    return v;
}

namespace {

DensityMatrix pure(const Eigen::VectorXcd& v, double hbar) {
    const Eigen::VectorXcd u = v / v.norm();
    return DensityMatrix(hermitize(u * u.adjoint()), hbar);
}

}  // namespace

DensityMatrix coherent_density(PhasePoint Y, int N, double hbar) {
    return pure(coherent_vector(Y, N, hbar), hbar);
}

DensityMatrix cat_density(PhasePoint Y, Parity sign, int N, double hbar) {
    if (sign == Parity::odd && Y.norm2() == 0.0)
        throw DomainError("odd cat with Y = 0 has zero norm");
    return pure(coherent_vector(Y, N, hbar) + sign_of(sign) * coherent_vector(-Y, N, hbar), hbar);
}

DensityMatrix number_density(int n, int N, double hbar) {
    require_dim(N);
    if (n < 0 || n >= N) throw DomainError("number state outside the truncated basis");
    FockMatrix r = FockMatrix::Zero(N, N);
    r(n, n) = 1.0;
    return DensityMatrix(r, hbar);
}

DensityMatrix mix(const DensityMatrix& a, const DensityMatrix& b, double weight) {
    if (a.dim != b.dim || a.hbar != b.hbar) throw GridMismatch("mixing densities of different frames");
    if (!(weight >= 0.0 && weight <= 1.0)) throw DomainError("mixture weight outside [0, 1]");
    return DensityMatrix(hermitize(weight * a.rho + (1.0 - weight) * b.rho), a.hbar);
}

double wigner_point(const DensityMatrix& rho, PhasePoint x) {
    const FockOperator r = reflection_block(x, rho.dim, rho.hbar);
    const Complex tr = (rho.rho * r.m).trace();
    if (std::abs(tr.imag()) > 1e-8) {
        std::ostringstream msg;
        msg << "imaginary residue " << tr.imag() << " in Tr(rho R_x): truncation too small";
        throw TruncationError(msg.str());
    }
    return tr.real() / (kPi * rho.hbar);
}

Complex chord_point(const DensityMatrix& rho, Chord xi) {
    const FockOperator t = translation_block(xi, rho.dim, rho.hbar);
    return (t.m * rho.rho).trace() / (2.0 * kPi * rho.hbar);
}

Complex expectation(const DensityMatrix& rho, const FockOperator& a) {
    if (a.dim != rho.dim) throw GridMismatch("operator and density dimensions differ");
    return (rho.rho * a.m).trace();
}

ProjectedDensity project_density(const DensityMatrix& rho, PhasePoint X, Parity sign,
                                 double p_floor) {
    const double s = sign_of(sign);
    const FockMatrix r = reflection_block(X, rho.dim, rho.hbar).m;
    const FockMatrix r_rho = r * rho.rho;
    const double probability = 0.5 * (1.0 + s * r_rho.trace().real());
    if (probability <= p_floor) {
        std::ostringstream msg;
        msg << "impossible outcome: probability of parity " << to_string(sign) << " is "
            << probability;
        throw ImpossibleOutcome(msg.str());
    }
    const double expected = 0.5 * (1.0 + s * kPi * rho.hbar * wigner_point(rho, X));
    if (std::abs(probability - expected) > 1e-8)
        throw TruncationError("parity probability disagrees with the Wigner value at X");

    // P rho P = (rho + s R rho + s rho R + R rho R) / 4, with R Hermitian.
    const FockMatrix projected =
        0.25 * (rho.rho + s * r_rho + s * r_rho.adjoint() + r_rho * r.adjoint());
    const double kept = projected.trace().real();
    if (std::abs(kept - probability) > 1e-10 * std::max(1.0, probability))
        throw TruncationError("projected state leaks out of the truncated basis");
    return {DensityMatrix(hermitize(projected / kept), rho.hbar), probability};
}

DensityMatrix dephase_density(const DensityMatrix& rho, double t, double c) {
    if (t < 0.0) throw DomainError("dephasing time must be non-negative");
    if (!(c > 0.0)) throw DomainError("coupling c must be positive");
    if (t == 0.0) return rho;

    const double hbar = rho.hbar;
    const int N = rho.dim;
    const double sigma = c * std::sqrt(hbar * t);
    // Node spacing resolves both the kernel and the fastest phase any state
    // representable in N levels can pick up under translation.
    const double k_max = std::sqrt(2.0 * hbar * N) / hbar;
    const double h = std::min(sigma / 4.0, 2.0 * kPi / (k_max + 7.0 / sigma));
    const int K = static_cast<int>(std::ceil(6.0 * sigma / h));
    if (K > 4000) throw DomainError("dephasing quadrature under-resolved: too many kernel nodes");

    std::vector<double> weight(2 * K + 1);
    double total = 0.0;
    for (int k = -K; k <= K; ++k) {
        const double y = k * h;
        weight[k + K] = std::exp(-y * y / (2.0 * sigma * sigma));
        total += weight[k + K];
    }
    for (double& w : weight) w /= total;

    const int M = working_dimension(N, Chord{K * h, K * h}, hbar);
    FockMatrix state = FockMatrix::Zero(M, M);
    state.topLeftCorner(N, N) = rho.rho;

    // T(kh) = T(h)^k holds exactly for the exponential of one truncated
    // generator, so one exponential per axis suffices.
    for (const Chord step : {Chord{0.0, h}, Chord{h, 0.0}}) {
        const FockMatrix forward = exp_translation(step, M, hbar);
        const FockMatrix backward = forward.adjoint();
        FockMatrix acc = weight[K] * state;
        FockMatrix up = FockMatrix::Identity(M, M);
        FockMatrix down = FockMatrix::Identity(M, M);
        for (int k = 1; k <= K; ++k) {
            up = forward * up;
            down = backward * down;
            acc += weight[K + k] * (up * state * up.adjoint());
            acc += weight[K - k] * (down * state * down.adjoint());
        }
        state = hermitize(acc);
    }

    FockMatrix out = state.topLeftCorner(N, N);
    const double kept = out.trace().real();
    if (std::abs(kept - 1.0) > 1e-8) {
        std::ostringstream msg;
        msg << "dephased state leaks out of the truncated basis (trace " << kept << ")";
        throw TruncationError(msg.str());
    }
    return DensityMatrix(hermitize(out / kept), hbar);
}

double density_purity(const DensityMatrix& rho) { return (rho.rho * rho.rho).trace().real(); }

std::array<double, 4> affine_group_residuals(PhasePoint x1, PhasePoint x2, Chord xi1, Chord xi2,
                                             int dim, int block, double hbar) {
    if (block > dim) throw DomainError("protected block larger than the basis");
    auto T = [&](Chord xi) { return translation_operator(xi, dim, hbar).m; };
    auto R = [&](PhasePoint x) { return reflection_operator(x, dim, hbar).m; };
    auto residual = [&](const FockMatrix& lhs, const FockMatrix& rhs) {
        return (lhs - rhs).topLeftCorner(block, block).cwiseAbs().maxCoeff();
    };
    const Chord half = 0.5 * xi1;
    std::array<double, 4> out{};
    out[0] = residual(T(xi1) * T(xi2),
                      T(xi1 + xi2) * std::polar(1.0, -symplectic_product(xi1, xi2) / (2.0 * hbar)));
    out[1] = residual(T(xi1) * R(x1),
                      R(x1 + half) * std::polar(1.0, symplectic_product(x1, xi1) / hbar));
    out[2] = residual(R(x1) * T(xi1),
                      R(x1 - half) * std::polar(1.0, symplectic_product(x1, xi1) / hbar));
    out[3] = residual(R(x1) * R(x2),
                      T(2.0 * (x1 - x2)) * std::polar(1.0, 2.0 * symplectic_product(x1, x2) / hbar));
    return out;
}

void write_density(std::ostream& out, const DensityMatrix& rho) {
    out << "# dim=" << rho.dim << ", hbar=" << format_double(rho.hbar) << '\n';
    for (int i = 0; i < rho.dim; ++i)
        for (int j = 0; j < rho.dim; ++j)
            out << i << ',' << j << ',' << format_double(rho.rho(i, j).real()) << ','
                << format_double(rho.rho(i, j).imag()) << '\n';
}

DensityMatrix read_density(std::istream& in) {
    std::string line;
    int dim = -1;
    double hbar = 0.0;
    FockMatrix m;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto d = line.find("dim=");
            const auto h = line.find("hbar=");
            if (d == std::string::npos || h == std::string::npos)
                throw FormatError("density header needs dim and hbar");
            const auto comma = line.find(',', d);
            dim = parse_int<int>(line.substr(d + 4, comma - d - 4));
            hbar = parse_double(line.substr(h + 5));
            if (dim < 1) throw FormatError("density dimension must be positive");
            m = FockMatrix::Zero(dim, dim);
            continue;
        }
        if (dim < 0) throw FormatError("density entries before header");
        const auto cells = split_csv(line);
        if (cells.size() != 4) throw FormatError("density entry needs row,col,re,im: " + line);
        const int i = parse_int<int>(cells[0]);
        const int j = parse_int<int>(cells[1]);
        if (i < 0 || j < 0 || i >= dim || j >= dim) throw FormatError("density index out of range");
        m(i, j) = Complex(parse_double(cells[2]), parse_double(cells[3]));
    }
    if (dim < 0) throw FormatError("missing density header");
    return DensityMatrix(m, hbar);
}

}  // namespace spiky
