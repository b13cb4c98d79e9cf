#pragma once

// Phase-space grids, quadrature, the symplectic form and the Wigner <-> chord
// transform pair. Phase-space points are x = (p, q); hbar carries area.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spiky/error.hpp"

namespace spiky {

using Complex = std::complex<double>;
using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kPi = 3.14159265358979323846;

struct PointTag {};
struct ChordTag {};

/// A pair (p, q). Points and chords are distinct types so that a chord is
/// never passed where a reflection centre is expected.
template <class Tag>
struct Vec2 {
    double p = 0.0;
    double q = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double p_, double q_) : p(p_), q(q_) {}

    constexpr double norm2() const { return p * p + q * q; }
    bool finite() const { return std::isfinite(p) && std::isfinite(q); }

    friend constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.p, s * v.q}; }
    friend constexpr Vec2 operator*(Vec2 v, double s) { return {s * v.p, s * v.q}; }
    friend constexpr Vec2 operator-(Vec2 v) { return {-v.p, -v.q}; }
    friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

using PhasePoint = Vec2<PointTag>;
using Chord = Vec2<ChordTag>;

constexpr Chord operator-(PhasePoint a, PhasePoint b) { return {a.p - b.p, a.q - b.q}; }
constexpr PhasePoint operator+(PhasePoint x, Chord c) { return {x.p + c.p, x.q + c.q}; }
constexpr PhasePoint operator-(PhasePoint x, Chord c) { return {x.p - c.p, x.q - c.q}; }
constexpr Chord operator+(Chord a, Chord b) { return {a.p + b.p, a.q + b.q}; }
constexpr Chord operator-(Chord a, Chord b) { return {a.p - b.p, a.q - b.q}; }

/// Chord from the origin to x.
constexpr Chord as_chord(PhasePoint x) { return {x.p, x.q}; }
/// Image of x under the point reflection through centre: 2*centre - x.
constexpr PhasePoint reflect(PhasePoint centre, PhasePoint x) {
    return {2.0 * centre.p - x.p, 2.0 * centre.q - x.q};
}

/// a . J b with J = [[0, -1], [1, 0]]; equals -a_p b_q + a_q b_p.
template <class A, class B>
constexpr double symplectic_product(Vec2<A> a, Vec2<B> b) {
    return -a.p * b.q + a.q * b.p;
}

/// Two-outcome parity sign.
enum class Parity : int { even = 1, odd = -1 };

constexpr double sign_of(Parity s) { return static_cast<int>(s); }
Parity parse_parity(const std::string& text);
std::string to_string(Parity s);

/// Uniform periodic grid. Nodes are p_i = p_min + i*dp, i in [0, n_p), with
/// dp = (p_max - p_min)/n_p, and likewise for q. Rows of a field map to p,
/// columns to q.
struct GridSpec {
    double p_min = 0.0;
    double p_max = 0.0;
    double q_min = 0.0;
    double q_max = 0.0;
    int n_p = 0;
    int n_q = 0;

    /// Throws DomainError unless the bounds are ordered, finite and the
    /// counts are even and at least 8.
    void validate() const;

    double dp() const { return (p_max - p_min) / n_p; }
    double dq() const { return (q_max - q_min) / n_q; }
    double cell_area() const { return dp() * dq(); }
    double p(int i) const { return p_min + i * dp(); }
    double q(int j) const { return q_min + j * dq(); }
    PhasePoint node(int i, int j) const { return {p(i), q(j)}; }
    double area() const { return (p_max - p_min) * (q_max - q_min); }

    /// True when x lies inside the sampled rectangle [first node, last node].
    bool covers(PhasePoint x) const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Square grid [-half_width, half_width) on both axes with n nodes each.
GridSpec symmetric_grid(double half_width, int n);

/// Domain rule for states built from displacement Y: half-width
/// |Y| + 6 sqrt(hbar (1 + 2 c^2 t_max)). With t_max = 0 this is the
/// static-state rule |Y| + 6 sqrt(hbar); a positive t_max widens the box for
/// diffusion up to that time.
GridSpec default_grid(PhasePoint Y, double hbar, int n = 256, double t_max = 0.0,
                      double c = 1.0);

/// Numerical-negativity tolerance 1e-6 / (pi hbar).
double eps_grid(double hbar);

/// Real samples of a Wigner function (or of a Weyl symbol) on a grid.
struct WignerField {
    GridSpec grid;
    double hbar = 1.0;
    RealMatrix values;
    bool normalized = false;
    std::vector<std::string> warnings;

    WignerField() = default;
    WignerField(const GridSpec& g, double h);

    double operator()(int i, int j) const { return values(i, j); }
    bool same_frame(const WignerField& other) const;
};

/// Complex samples of the chord function. Rows map to xi_p, columns to xi_q.
/// `source` records the unpadded x-grid a transformed field came from.
struct ChordField {
    GridSpec grid;
    double hbar = 1.0;
    ComplexMatrix values;
    std::optional<GridSpec> source;
};

/// Samples fn at every node of grid.
WignerField tabulate(const GridSpec& grid, double hbar,
                     const std::function<double(PhasePoint)>& fn);

/// Riemann sum of values * dp * dq.
double integrate(const WignerField& field);

/// Riemann sum of symbol * W; throws GridMismatch unless grids and hbar agree.
double expectation(const WignerField& symbol, const WignerField& w);

/// Discrete form of W~(xi) = (1/2 pi hbar) int dx W(x) exp((i/hbar) x.J xi),
/// zero-padded by pad_factor on each axis. The xi_q axis is conjugate to p
/// with spacing 2 pi hbar/(pad n_p dp); the xi_p axis is conjugate to q.
/// xi = 0 is always a node.
ChordField wigner_to_chord(const WignerField& w, int pad_factor = 2);

/// Exact inverse of wigner_to_chord onto the recorded source grid.
WignerField chord_to_wigner(const ChordField& c);
/// Inverse transform onto an explicit target grid, which must be reciprocal
/// to the chord grid; throws GridMismatch otherwise.
WignerField chord_to_wigner(const ChordField& c, const GridSpec& target);

/// Bilinear interpolation of the chord samples. Throws DomainError when xi
/// leaves the sampled chord domain.
Complex chord_at(const ChordField& c, Chord xi);

struct Extrema {
    double min = 0.0;
    PhasePoint argmin;
    double max = 0.0;
    PhasePoint argmax;
};

Extrema field_min_max(const WignerField& w);

/// Band-limited (periodic sinc) interpolation of the field at x. Exact on
/// nodes. Throws DomainError when x lies outside the grid.
double interpolate(const WignerField& w, PhasePoint x);

/// W(2X - x) at every node x, by periodic sinc interpolation. Reflected points
/// that fall outside the grid contribute zero.
RealMatrix reflected_values(const WignerField& w, PhasePoint centre);

}  // namespace spiky
