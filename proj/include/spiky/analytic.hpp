#pragma once

// Closed-form Wigner and chord functions for coherent states, parity cat
// states and cat states coarse-grained by Gaussian diffusion.

#include "spiky/core.hpp"

namespace spiky {

/// Centre of a coherent state: <p> = P (the p component), <q> = Q.
using DisplacementY = PhasePoint;

struct CatParameters {
    DisplacementY Y;
    Parity sign = Parity::odd;
    double hbar = 0.1;

    /// Throws DomainError for non-positive hbar or the zero-norm odd cat Y = 0.
    void validate() const;
};

/// (1/pi hbar) exp(-|x - Y|^2 / hbar).
double coherent_wigner(DisplacementY Y, double hbar, PhasePoint x);

/// (1/2 pi hbar) exp(-|xi|^2 / 4 hbar) exp((i/hbar) Y.J xi).
Complex coherent_chord(DisplacementY Y, double hbar, Chord xi);

/// Wigner function of the normalized superposition |Y> + sign |-Y>:
///
///   [e^{-(x-Y)^2/h} + e^{-(x+Y)^2/h} + 2 sign e^{-x^2/h} cos(2 x.JY / h)]
///   / (2 pi h (1 + sign e^{-Y^2/h}))
///
/// The normalization 1 + sign e^{-Y^2/h} equals 2 Tr(rho P) for the coherent
/// state, so W(0) = sign/(pi h) exactly.
double cat_wigner(const CatParameters& params, PhasePoint x);

/// Odd cat evolved under the isotropic diffusion dW/dt = (hbar c^2/2) lap W
/// for a time t; reduces to cat_wigner(odd) at t = 0.
double evolved_cat_wigner(DisplacementY Y, double t, double c, double hbar, PhasePoint x);

/// Node-wise evaluation of a closed-form state. Sets `normalized` when the
/// Riemann sum is within 1e-6 of one and records a warning when more than
/// 1e-9 of the mass (or of the edge amplitude) escapes the grid.
WignerField rasterize(const std::function<double(PhasePoint)>& state, const GridSpec& grid,
                      double hbar);

}  // namespace spiky
