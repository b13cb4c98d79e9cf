#include "spiky/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spiky {

void CatParameters::validate() const {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("hbar must be positive");
    if (!Y.finite()) throw DomainError("cat displacement must be finite");
    if (sign == Parity::odd && Y.norm2() == 0.0)
        throw DomainError("odd cat with Y = 0 has zero norm");
}

double coherent_wigner(DisplacementY Y, double hbar, PhasePoint x) {
    return std::exp(-(x - Y).norm2() / hbar) / (kPi * hbar);
}

Complex coherent_chord(DisplacementY Y, double hbar, Chord xi) {
    const double amp = std::exp(-xi.norm2() / (4.0 * hbar)) / (2.0 * kPi * hbar);
    return std::polar(amp, symplectic_product(Y, xi) / hbar);
}

double cat_wigner(const CatParameters& params, PhasePoint x) {
    params.validate();
    const double h = params.hbar;
    const DisplacementY Y = params.Y;
    const double s = sign_of(params.sign);
    const double mounds = std::exp(-(x - Y).norm2() / h) + std::exp(-(x + as_chord(Y)).norm2() / h);
    const double fringes = 2.0 * s * std::exp(-x.norm2() / h) *
                           std::cos(2.0 * symplectic_product(x, Y) / h);
    const double norm = 1.0 + s * std::exp(-Y.norm2() / h);
    return (mounds + fringes) / (2.0 * kPi * h * norm);
}

double evolved_cat_wigner(DisplacementY Y, double t, double c, double hbar, PhasePoint x) {
    CatParameters{Y, Parity::odd, hbar}.validate();
    if (t < 0.0) throw DomainError("evolution time must be non-negative");
    const double width = hbar * (2.0 * c * c * t + 1.0);
    const double n_inv = 2.0 * (1.0 - std::exp(-Y.norm2() / hbar));
    const double mounds = std::exp(-(x - Y).norm2() / width) + std::exp(-(x + as_chord(Y)).norm2() / width);
    const double fringes = 2.0 * std::exp(-x.norm2() / width) *
                           std::exp(-2.0 * c * c * t * Y.norm2() / width) *
                           std::cos(2.0 * symplectic_product(x, Y) / width);
    return (mounds - fringes) / (n_inv * kPi * width);
}

WignerField rasterize(const std::function<double(PhasePoint)>& state, const GridSpec& grid,
                      double hbar) {
    WignerField w = tabulate(grid, hbar, state);
    const double mass = integrate(w);
    w.normalized = std::abs(mass - 1.0) <= 1e-6;

    double edge = 0.0;
    const auto& v = w.values;
    const Eigen::Index last_r = v.rows() - 1, last_c = v.cols() - 1;
    edge = std::max({v.row(0).cwiseAbs().maxCoeff(), v.row(last_r).cwiseAbs().maxCoeff(),
                     v.col(0).cwiseAbs().maxCoeff(), v.col(last_c).cwiseAbs().maxCoeff()});
    const double escaped = std::max(std::abs(1.0 - mass), edge * kPi * hbar);
    if (escaped > 1e-9) {
        std::ostringstream msg;
        msg << "support escapes grid: estimated tail " << escaped;
        w.warnings.push_back(msg.str());
    }
    return w;
}

}  // namespace spiky
