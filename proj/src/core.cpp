#include "spiky/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fft.hpp"

namespace spiky {

using detail::FftSign;
using detail::fft_axis;
using detail::sinc_weights;

Parity parse_parity(const std::string& text) {
    if (text == "+" || text == "+1" || text == "1" || text == "even" || text == "plus")
        return Parity::even;
    if (text == "-" || text == "-1" || text == "odd" || text == "minus") return Parity::odd;
    throw Error("unknown parity sign '" + text + "' (expected + or -)");
}

std::string to_string(Parity s) { return s == Parity::even ? "+" : "-"; }

void GridSpec::validate() const {
    const bool finite = std::isfinite(p_min) && std::isfinite(p_max) && std::isfinite(q_min) &&
                        std::isfinite(q_max);
    if (!finite) throw DomainError("grid bounds must be finite");
    if (!(p_max > p_min) || !(q_max > q_min))
        throw DomainError("grid bounds must satisfy max > min on both axes");
    if (n_p < 8 || n_q < 8 || n_p % 2 != 0 || n_q % 2 != 0) {
        std::ostringstream msg;
        msg << "grid counts must be even and >= 8 (got " << n_p << " x " << n_q << ")";
        throw DomainError(msg.str());
    }
}

bool GridSpec::covers(PhasePoint x) const {
    return x.p >= p_min && x.p <= p(n_p - 1) && x.q >= q_min && x.q <= q(n_q - 1);
}

GridSpec symmetric_grid(double half_width, int n) {
    GridSpec g{-half_width, half_width, -half_width, half_width, n, n};
    g.validate();
    return g;
}

GridSpec default_grid(PhasePoint Y, double hbar, int n, double t_max, double c) {
    if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
    if (t_max < 0.0) throw DomainError("t_max must be non-negative");
    const double half = std::sqrt(Y.norm2()) + 6.0 * std::sqrt(hbar * (1.0 + 2.0 * c * c * t_max));
    return symmetric_grid(half, n);
}

double eps_grid(double hbar) { return 1e-6 / (kPi * hbar); }

WignerField::WignerField(const GridSpec& g, double h)
    : grid(g), hbar(h), values(RealMatrix::Zero(g.n_p, g.n_q)) {
    grid.validate();
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("hbar must be positive");
}

bool WignerField::same_frame(const WignerField& other) const {
    return grid == other.grid && hbar == other.hbar;
}

WignerField tabulate(const GridSpec& grid, double hbar,
                     const std::function<double(PhasePoint)>& fn) {
    WignerField w(grid, hbar);
    for (int i = 0; i < grid.n_p; ++i)
        for (int j = 0; j < grid.n_q; ++j) w.values(i, j) = fn(grid.node(i, j));
    return w;
}

double integrate(const WignerField& field) {
    return field.values.sum() * field.grid.cell_area();
}

double expectation(const WignerField& symbol, const WignerField& w) {
    if (!symbol.same_frame(w)) throw GridMismatch("expectation: symbol and field grids differ");
    return symbol.values.cwiseProduct(w.values).sum() * w.grid.cell_area();
}

namespace {

struct ChordAxes {
    int m_p = 0;  // padded length along p (count of xi_q samples)
    int m_q = 0;  // padded length along q (count of xi_p samples)
    double dxi_q = 0.0;
    double dxi_p = 0.0;

    double xi_q(int k) const { return (k - m_p / 2) * dxi_q; }
    double xi_p(int l) const { return (l - m_q / 2) * dxi_p; }
};

// Phase and weight linking the FFT output T(k, l) to W~(xi_p(l), xi_q(k)).
Complex chord_phase(const GridSpec& x, const ChordAxes& ax, double hbar, int k, int l) {
    const double arg = (-x.p_min * ax.xi_q(k) + x.q_min * ax.xi_p(l)) / hbar;
    return std::polar(x.cell_area() / (2.0 * kPi * hbar), arg);
}

bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

ChordField wigner_to_chord(const WignerField& w, int pad_factor) {
    if (pad_factor < 1) throw DomainError("pad_factor must be >= 1");
    const GridSpec& g = w.grid;
    ChordAxes ax;
    ax.m_p = pad_factor * g.n_p;
    ax.m_q = pad_factor * g.n_q;
    ax.dxi_q = 2.0 * kPi * w.hbar / (ax.m_p * g.dp());
    ax.dxi_p = 2.0 * kPi * w.hbar / (ax.m_q * g.dq());

    ComplexMatrix t = ComplexMatrix::Zero(ax.m_p, ax.m_q);
    for (int a = 0; a < g.n_p; ++a)
        for (int b = 0; b < g.n_q; ++b)
            t(a, b) = ((a + b) % 2 == 0) ? w.values(a, b) : -w.values(a, b);
    fft_axis(t, 0, FftSign::forward);
    fft_axis(t, 1, FftSign::backward);

    ChordField c;
    c.hbar = w.hbar;
    c.grid = GridSpec{-0.5 * ax.m_q * ax.dxi_p, 0.5 * ax.m_q * ax.dxi_p,
                      -0.5 * ax.m_p * ax.dxi_q, 0.5 * ax.m_p * ax.dxi_q,
                      ax.m_q,                   ax.m_p};
    c.source = g;
    c.values.resize(ax.m_q, ax.m_p);
    for (int k = 0; k < ax.m_p; ++k)
        for (int l = 0; l < ax.m_q; ++l) c.values(l, k) = t(k, l) * chord_phase(g, ax, w.hbar, k, l);
    return c;
}

WignerField chord_to_wigner(const ChordField& c) {
    if (!c.source) throw GridMismatch("chord field carries no source grid; pass a target grid");
    return chord_to_wigner(c, *c.source);
}

WignerField chord_to_wigner(const ChordField& c, const GridSpec& target) {
    target.validate();
    ChordAxes ax;
    ax.m_p = c.grid.n_q;
    ax.m_q = c.grid.n_p;
    ax.dxi_q = c.grid.dq();
    ax.dxi_p = c.grid.dp();
    const double two_pi_hbar = 2.0 * kPi * c.hbar;
    const bool reciprocal = ax.m_p % target.n_p == 0 && ax.m_q % target.n_q == 0 &&
                            close_rel(ax.dxi_q * ax.m_p * target.dp(), two_pi_hbar, 1e-9) &&
                            close_rel(ax.dxi_p * ax.m_q * target.dq(), two_pi_hbar, 1e-9) &&
                            std::abs(c.grid.q_min + 0.5 * ax.m_p * ax.dxi_q) <= 1e-9 * ax.dxi_q &&
                            std::abs(c.grid.p_min + 0.5 * ax.m_q * ax.dxi_p) <= 1e-9 * ax.dxi_p;
    if (!reciprocal) throw GridMismatch("chord grid is not reciprocal to the target grid");

    ComplexMatrix t(ax.m_p, ax.m_q);
    for (int k = 0; k < ax.m_p; ++k)
        for (int l = 0; l < ax.m_q; ++l) t(k, l) = c.values(l, k) / chord_phase(target, ax, c.hbar, k, l);
    fft_axis(t, 0, FftSign::backward);
    fft_axis(t, 1, FftSign::forward);

    WignerField w(target, c.hbar);
    const double scale = 1.0 / (static_cast<double>(ax.m_p) * ax.m_q);
    for (int a = 0; a < target.n_p; ++a)
        for (int b = 0; b < target.n_q; ++b) {
            const double v = t(a, b).real() * scale;
            w.values(a, b) = ((a + b) % 2 == 0) ? v : -v;
        }
    return w;
}

Complex chord_at(const ChordField& c, Chord xi) {
    double r = (xi.p - c.grid.p_min) / c.grid.dp();
    double s = (xi.q - c.grid.q_min) / c.grid.dq();
    // node arguments come back as the stored sample
    if (std::abs(r - std::round(r)) < 1e-9) r = std::round(r);
    if (std::abs(s - std::round(s)) < 1e-9) s = std::round(s);
    const int last_r = c.grid.n_p - 1;
    const int last_s = c.grid.n_q - 1;
    if (!(r >= 0.0 && r <= last_r && s >= 0.0 && s <= last_s)) {
        std::ostringstream msg;
        msg << "chord argument (" << xi.p << ", " << xi.q
            << ") lies outside the chord domain; increase pad_factor";
        throw DomainError(msg.str());
    }
    const int i0 = std::min(static_cast<int>(std::floor(r)), last_r - 1);
    const int j0 = std::min(static_cast<int>(std::floor(s)), last_s - 1);
    const double fr = r - i0;
    const double fs = s - j0;
    return (1.0 - fr) * ((1.0 - fs) * c.values(i0, j0) + fs * c.values(i0, j0 + 1)) +
           fr * ((1.0 - fs) * c.values(i0 + 1, j0) + fs * c.values(i0 + 1, j0 + 1));
}

Extrema field_min_max(const WignerField& w) {
    Eigen::Index imin = 0, jmin = 0, imax = 0, jmax = 0;
    Extrema e;
    e.min = w.values.minCoeff(&imin, &jmin);
    e.max = w.values.maxCoeff(&imax, &jmax);
    e.argmin = w.grid.node(static_cast<int>(imin), static_cast<int>(jmin));
    e.argmax = w.grid.node(static_cast<int>(imax), static_cast<int>(jmax));
    return e;
}

double interpolate(const WignerField& w, PhasePoint x) {
    if (!w.grid.covers(x)) {
        std::ostringstream msg;
        msg << "point (" << x.p << ", " << x.q << ") lies outside the grid";
        throw DomainError(msg.str());
    }
    const Eigen::VectorXd wp = sinc_weights((x.p - w.grid.p_min) / w.grid.dp(), w.grid.n_p);
    const Eigen::VectorXd wq = sinc_weights((x.q - w.grid.q_min) / w.grid.dq(), w.grid.n_q);
    return wp.dot(w.values * wq);
}

namespace {

// Row i holds the interpolation weights for the reflected coordinate
// 2*centre - node_i along one axis; zero when it leaves the sampled range.
Eigen::MatrixXd reflection_weights(double centre, double min, double step, int n) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double s = 2.0 * centre - (min + i * step);
        const double idx = (s - min) / step;
        if (idx < -1e-9 || idx > (n - 1) + 1e-9) continue;
        r.row(i) = sinc_weights(idx, n).transpose();
    }
    return r;
}

}  // namespace

RealMatrix reflected_values(const WignerField& w, PhasePoint centre) {
    const GridSpec& g = w.grid;
    const Eigen::MatrixXd rp = reflection_weights(centre.p, g.p_min, g.dp(), g.n_p);
    const Eigen::MatrixXd rq = reflection_weights(centre.q, g.q_min, g.dq(), g.n_q);
    return rp * w.values * rq.transpose();
}

}  // namespace spiky
