#pragma once

// Markovian coarse-graining of Wigner functions under
//   dW/dt = (hbar c^2 / 2) (d^2W/dp^2 + d^2W/dq^2),
// positivity-threshold detection and scalar decoherence measures.

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "spiky/core.hpp"

namespace spiky {

struct DiffusionParams {
    double c = 1.0;
    double hbar = 0.1;

    void validate() const;
    /// Pure-state positivity threshold 1/(2 c^2).
    double t0() const { return 1.0 / (2.0 * c * c); }
};

/// Estimated mass of |W| carried outside the grid by a Gaussian kernel of
/// per-axis standard deviation sigma.
double escaped_mass(const WignerField& w, double sigma);

/// Convolution of W with exp(-y^2/(2 hbar c^2 t)) / (2 pi hbar c^2 t), done
/// as multiplication of the padded chord field by exp(-c^2 t |xi|^2/(2 hbar)).
/// t = 0 returns the input unchanged. Throws DomainError when more than 1e-9
/// of the mass would leave the grid.
WignerField heat_propagate(const WignerField& w, double t, const DiffusionParams& params,
                           int pad_factor = 2);

/// 2 pi hbar int W^2 dx (= Tr rho^2).
double purity(const WignerField& w);

/// int (|W| - W)/2 dx.
double negativity_volume(const WignerField& w);

struct ThresholdReport {
    double t_star = 0.0;
    std::vector<std::pair<double, double>> min_trace;  // (t, min W), sorted by t
    double epsilon = 0.0;
    bool monotone = true;  // min W non-decreasing along the trace
};

/// Bisection for the earliest t with min_x W(x, t) >= -epsilon, stopping when
/// the bracket is narrower than 1e-3 t_hi. t_hi defaults to 4 t0. Returns
/// t_star = 0 for an already non-negative field; throws DomainError when the
/// field is still negative at t_hi.
ThresholdReport positivity_threshold(const WignerField& w0, const DiffusionParams& params,
                                     std::optional<double> t_hi = std::nullopt,
                                     std::optional<double> epsilon = std::nullopt);

/// `t,min_w` rows followed by a `# t_star=...` summary line.
void write_threshold_report(std::ostream& out, const ThresholdReport& report);

}  // namespace spiky
