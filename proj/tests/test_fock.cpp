#include "doctest.h"

#include <sstream>

#include "spiky/analytic.hpp"
#include "spiky/decoherence.hpp"
#include "spiky/fock.hpp"
#include "support.hpp"

using namespace spiky;
using testing::Gen;

namespace {

constexpr double kHbar = 0.1;
const PhasePoint kY{0, 1};
constexpr int kN = 60;

double block_deviation(const FockMatrix& a, const FockMatrix& b, int block) {
    return (a - b).topLeftCorner(block, block).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("ladder and quadratures") {
    const Quadratures qp = ladder_and_quadratures(kN, kHbar);
    CHECK(qp.q.m(0, 0) == 0.0);
    CHECK((qp.q.m * qp.q.m)(0, 0).real() == doctest::Approx(kHbar / 2.0));
    CHECK((qp.p.m * qp.p.m)(0, 0).real() == doctest::Approx(kHbar / 2.0));
    for (int n = 0; n < kN; ++n) {
        CHECK(qp.q.m(n, n) == 0.0);
        CHECK(qp.p.m(n, n) == 0.0);
    }
    const FockMatrix comm = qp.q.m * qp.p.m - qp.p.m * qp.q.m;
    const FockMatrix expected = Complex(0.0, kHbar) * FockMatrix::Identity(kN - 1, kN - 1);
    CHECK((comm.topLeftCorner(kN - 1, kN - 1) - expected).cwiseAbs().maxCoeff() < 1e-14);
    CHECK_THROWS_AS(ladder_and_quadratures(3, kHbar), DomainError);
}

TEST_CASE("truncation rule") {
    CHECK(truncation_for({0, 0}, kHbar) == 20);
    CHECK(truncation_for({0, 1}, kHbar) == 48);
    CHECK(truncation_for({2, 0}, kHbar) == 85);
    CHECK_THROWS_AS(working_dimension(20, {0, 3.0}, kHbar), TruncationError);
    CHECK_THROWS_AS(translation_operator({0, 3.0}, 20, kHbar), TruncationError);
}

TEST_CASE("translations") {
    CHECK((translation_operator({0, 0}, kN, kHbar).m - FockMatrix::Identity(kN, kN)).cwiseAbs().maxCoeff() < 1e-15);

    const Quadratures qp = ladder_and_quadratures(kN, kHbar);
    Gen gen(2);
    for (int k = 0; k < 10; ++k) {
        const Chord xi = gen.chord(1.0);
        const Eigen::VectorXcd v = translation_block(xi, kN, kHbar).m.col(0);
        CHECK(std::abs((v.adjoint() * qp.q.m * v)(0, 0) - xi.q) < 1e-8);
        CHECK(std::abs((v.adjoint() * qp.p.m * v)(0, 0) - xi.p) < 1e-8);
        CHECK((v - coherent_vector({xi.p, xi.q}, kN, kHbar))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);

        const FockMatrix t = translation_operator(xi, kN, kHbar).m;
        const FockMatrix u = t.adjoint() * t;
        CHECK(block_deviation(u, FockMatrix::Identity(kN, kN), kN / 2) < 1e-8);
    }
}

TEST_CASE("reflections") {
    const FockMatrix r0 = reflection_operator({0, 0}, kN, kHbar).m;
    for (int n = 0; n < kN; ++n) CHECK(r0(n, n) == (n % 2 == 0 ? 1.0 : -1.0));
    CHECK(r0 == parity_operator(kN, kHbar).m);

    Gen gen(6);
    for (int k = 0; k < 10; ++k) {
        const PhasePoint x = gen.point(0.6);
        const FockMatrix r = reflection_operator(x, 200, kHbar).m;
        CHECK(block_deviation(r, r.adjoint(), kN / 2) < 1e-8);
        CHECK(block_deviation(r * r, FockMatrix::Identity(200, 200), kN / 2) < 1e-8);

        const PhasePoint Y = gen.point(0.6);
        const Eigen::VectorXcd image = reflection_block(x, kN, kHbar).m * coherent_vector(Y, kN, kHbar);
        const Eigen::VectorXcd target = coherent_vector(reflect(x, Y), kN, kHbar);
        CHECK(std::abs(std::abs(target.dot(image)) - 1.0) < 1e-6);
    }
}

TEST_CASE("affine group relations") {
    const double r = 2.0 * std::sqrt(kHbar) * std::sqrt(static_cast<double>(kN)) / 4.0;
    Gen gen(19);
    for (int k = 0; k < 6; ++k) {
        const auto res = affine_group_residuals(gen.point_in_disc(r), gen.point_in_disc(r), gen.chord_in_disc(r),
                                                gen.chord_in_disc(r), 160, kN / 2, kHbar);
        for (double v : res) CHECK(v < 1e-8);
    }
    // The printed sign of the mixed relations fails; the corrected sign holds.
    const PhasePoint x{0.3, 0.2};
    const Chord xi{-0.2, 0.4};
    const auto T = [](Chord c) { return translation_operator(c, 160, kHbar).m; };
    const auto R = [](PhasePoint p) { return reflection_operator(p, 160, kHbar).m; };
    const FockMatrix printed = R(x + 0.5 * xi) * std::polar(1.0, -symplectic_product(x, xi) / kHbar);
    CHECK(block_deviation(T(xi) * R(x), printed, kN / 2) > 0.1);
}

TEST_CASE("wigner point") {
    CHECK(wigner_point(number_density(0, kN, kHbar), {0, 0}) == doctest::Approx(1.0 / (kPi * kHbar)));
    CHECK(wigner_point(number_density(1, kN, kHbar), {0, 0}) == doctest::Approx(-1.0 / (kPi * kHbar)));

    const PhasePoint Y{0.4, -0.5};
    const DensityMatrix rho = coherent_density(Y, kN, kHbar);
    Gen gen(13);
    for (int k = 0; k < 32; ++k) {
        const PhasePoint x = gen.point_in_disc(1.2);
        CHECK(std::abs(wigner_point(rho, x) - coherent_wigner(Y, kHbar, x)) < 1e-6);
    }
    CHECK_THROWS_AS(wigner_point(rho, {5, 5}), TruncationError);
}

TEST_CASE("coherent amplitude convention") {
    const PhasePoint Y{0.7, -0.3};
    const DensityMatrix rho = coherent_density(Y, kN, kHbar);
    const Quadratures qp = ladder_and_quadratures(kN, kHbar);
    CHECK(std::abs(expectation(rho, qp.q) - Y.q) < 1e-10);
    CHECK(std::abs(expectation(rho, qp.p) - Y.p) < 1e-10);
    CHECK_THROWS_AS(expectation(rho, ladder_and_quadratures(10, kHbar).q), GridMismatch);
}

TEST_CASE("chord point") {
    const PhasePoint Y{0.2, 0.5};
    const DensityMatrix rho = coherent_density(Y, kN, kHbar);
    CHECK(std::abs(chord_point(rho, {0, 0}) - Complex(1.0 / (2.0 * kPi * kHbar), 0)) < 1e-12);
    Gen gen(23);
    const DensityMatrix cat = cat_density(kY, Parity::odd, kN, kHbar);
    for (int k = 0; k < 32; ++k) {
        const Chord xi = gen.chord_in_disc(2.0);
        CHECK(std::abs(chord_point(rho, xi) - coherent_chord(Y, kHbar, xi)) < 1e-6);
        CHECK(std::abs(chord_point(cat, -xi) - std::conj(chord_point(cat, xi))) < 1e-12);
    }
}

TEST_CASE("density validation") {
    FockMatrix m = FockMatrix::Zero(4, 4);
    m(0, 0) = 0.5;
    CHECK_THROWS_AS(DensityMatrix(m, kHbar), DomainError);
    m(1, 1) = 0.5;
    CHECK_NOTHROW(DensityMatrix(m, kHbar));
    m(0, 1) = 0.1;
    CHECK_THROWS_AS(DensityMatrix(m, kHbar), DomainError);
    m(1, 0) = 0.1;
    CHECK_NOTHROW(DensityMatrix(m, kHbar));
    m(0, 1) = m(1, 0) = 0.9;
    CHECK_THROWS_AS(DensityMatrix(m, kHbar), DomainError);
    CHECK_THROWS_AS(number_density(10, 8, kHbar), DomainError);
    CHECK_THROWS_AS(cat_density({0, 0}, Parity::odd, kN, kHbar), DomainError);
    CHECK_THROWS_AS(mix(number_density(0, 8, kHbar), number_density(0, 10, kHbar), 0.5), GridMismatch);
}

TEST_CASE("parity projection of densities") {
    SUBCASE("coherent to odd cat") {
        const ProjectedDensity out = project_density(coherent_density(kY, kN, kHbar), {0, 0}, Parity::odd);
        CHECK(out.probability == doctest::Approx(0.5 * (1.0 - std::exp(-1.0 / kHbar))).epsilon(1e-12));
        const CatParameters cat{kY, Parity::odd, kHbar};
        Gen gen(29);
        for (int k = 0; k < 32; ++k) {
            const PhasePoint x = gen.point_in_disc(1.5);
            CHECK(std::abs(wigner_point(out.state, x) - cat_wigner(cat, x)) < 1e-5);
        }
        for (int n = 0; n < kN; n += 2) CHECK(std::abs(out.state.rho(n, n)) < 1e-8);
    }
    SUBCASE("fixed point") {
        const DensityMatrix odd = cat_density(kY, Parity::odd, kN, kHbar);
        const ProjectedDensity out = project_density(odd, {0, 0}, Parity::odd);
        CHECK(out.probability == doctest::Approx(1.0).epsilon(1e-12));
        CHECK((out.state.rho - odd.rho).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("mixture of cats splits into the pure cats") {
        const DensityMatrix even = cat_density(kY, Parity::even, kN, kHbar);
        const DensityMatrix odd = cat_density(kY, Parity::odd, kN, kHbar);
        const DensityMatrix m = mix(even, odd, 0.5);
        const ProjectedDensity plus = project_density(m, {0, 0}, Parity::even);
        const ProjectedDensity minus = project_density(m, {0, 0}, Parity::odd);
        CHECK(plus.probability == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(minus.probability == doctest::Approx(0.5).epsilon(1e-12));
        CHECK((plus.state.rho - even.rho).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((minus.state.rho - odd.rho).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("impossible outcome") {
        CHECK_THROWS_AS(project_density(number_density(1, kN, kHbar), {0, 0}, Parity::even), ImpossibleOutcome);
    }
    SUBCASE("probability identity and spectrum off-centre") {
        const DensityMatrix rho = mix(cat_density(kY, Parity::odd, kN, kHbar), coherent_density({0.3, 0.3}, kN, kHbar), 0.7);
        // images land at 2X -+ Y, so |X| <= 0.5 keeps them inside the basis
        CHECK_THROWS_AS(project_density(rho, {0.0, -1.0}, Parity::even), TruncationError);
        Gen gen(37);
        for (int k = 0; k < 8; ++k) {
            const PhasePoint X = gen.point_in_disc(0.5);
            for (Parity s : {Parity::even, Parity::odd}) {
                const ProjectedDensity out = project_density(rho, X, s);
                CHECK(out.probability ==
                      doctest::Approx(0.5 * (1.0 + sign_of(s) * kPi * kHbar * wigner_point(rho, X))).epsilon(1e-10));
                const Eigen::SelfAdjointEigenSolver<FockMatrix> eig(out.state.rho);
                CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
                CHECK(eig.eigenvalues().maxCoeff() <= 1.0 + 1e-10);
                CHECK(wigner_point(out.state, X) == doctest::Approx(sign_of(s) / (kPi * kHbar)).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("dephasing") {
    const DensityMatrix cat = cat_density(kY, Parity::odd, kN, kHbar);
    CHECK(dephase_density(cat, 0.0, 1.0).rho == cat.rho);
    CHECK_THROWS_AS(dephase_density(cat, -1.0, 1.0), DomainError);

    const DensityMatrix at_t0 = dephase_density(cat, 0.5, 1.0);
    CHECK(std::abs(at_t0.rho.trace().real() - 1.0) < 1e-8);
    CHECK(std::abs(wigner_point(at_t0, {0, 0})) < 1e-4);
    CHECK(density_purity(at_t0) == doctest::Approx(0.25).epsilon(1e-6));

    Gen gen(43);
    for (int k = 0; k < 16; ++k) {
        const PhasePoint x = gen.point_in_disc(1.5);
        CHECK(std::abs(wigner_point(at_t0, x) - evolved_cat_wigner(kY, 0.5, 1.0, kHbar, x)) < 1e-4);
    }

    double previous = density_purity(cat);
    for (double t : {0.05, 0.2, 0.4}) {
        const double p = density_purity(dephase_density(cat, t, 1.0));
        CHECK(p < previous);
        previous = p;
    }
}

TEST_CASE("dephasing matches grid propagation of the oracle state") {
    const DensityMatrix rho = mix(cat_density(kY, Parity::even, kN, kHbar), coherent_density({0.4, 0}, kN, kHbar), 0.6);
    const CatParameters cat{kY, Parity::even, kHbar};
    const auto closed = [&](PhasePoint x) { return 0.6 * cat_wigner(cat, x) + 0.4 * coherent_wigner({0.4, 0}, kHbar, x); };
    Gen gen(47);
    for (int k = 0; k < 16; ++k) {
        const PhasePoint x = gen.point_in_disc(1.5);
        CHECK(std::abs(wigner_point(rho, x) - closed(x)) < 1e-10);
    }
    const WignerField evolved = heat_propagate(rasterize(closed, default_grid(kY, kHbar, 256, 0.3), kHbar), 0.3, {1.0, kHbar});
    const DensityMatrix out = dephase_density(rho, 0.3, 1.0);
    for (int k = 0; k < 16; ++k) {
        const PhasePoint x = gen.point_in_disc(1.5);
        CHECK(std::abs(wigner_point(out, x) - interpolate(evolved, x)) < 1e-4);
    }
}

TEST_CASE("density serialization") {
    const DensityMatrix rho = cat_density({0.3, 0.4}, Parity::even, 12, kHbar);
    std::stringstream buf;
    write_density(buf, rho);
    CHECK(buf.str().rfind("# dim=12, hbar=0.10000000000000001\n", 0) == 0);
    const DensityMatrix back = read_density(buf);
    CHECK(back.dim == 12);
    CHECK(back.hbar == kHbar);
    CHECK(back.rho == rho.rho);

    std::istringstream bad("# dim=2, hbar=0.1\n0,0,1,0\n5,0,0,0\n");
    CHECK_THROWS_AS(read_density(bad), FormatError);
    std::istringstream missing("0,0,1,0\n");
    CHECK_THROWS_AS(read_density(missing), FormatError);
}
