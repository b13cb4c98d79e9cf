#pragma once

// Ideal parity measurement about an arbitrary phase-space point: outcome
// probabilities, post-measurement Wigner functions and seeded Monte-Carlo
// sampling of repeated measurements.

#include <cstdint>
#include <iosfwd>
#include <string>

#include "spiky/core.hpp"

namespace spiky {

struct OutcomeProbabilities {
    double plus = 0.5;
    double minus = 0.5;

    double of(Parity s) const { return s == Parity::even ? plus : minus; }
};

/// p+- = (1 +- pi hbar W(X)) / 2 with W(X) interpolated from the grid.
/// Values within 1e-6 outside [0, 1] are clamped; |pi hbar W(X)| > 1 + 1e-6
/// throws DomainError.
OutcomeProbabilities parity_probabilities(const WignerField& w, PhasePoint X);

struct ProjectionOptions {
    double p_floor = 1e-10;
};

/// Wigner function of P rho P / Tr(rho P) for P = (1 + sign R_X)/2:
///
///   W_s(x) = [W(x) + W(2X - x) + 4 s Re{W~(2(X - x)) e^{-(2i/hbar) x.J X}}]
///            / (2 (1 + s pi hbar W(X)))
///
/// with W~ the chord function of W. The reflected term uses band-limited
/// interpolation; the chord term is summed exactly at every output node.
/// Throws ImpossibleOutcome when the outcome probability is below p_floor.
WignerField project_parity(const WignerField& w, PhasePoint X, Parity sign,
                           const ProjectionOptions& options = {});

struct MeasurementRecord {
    PhasePoint X;
    std::int64_t n_plus = 0;
    std::int64_t n_minus = 0;
    std::uint64_t seed = 0;

    std::int64_t total() const { return n_plus + n_minus; }
};

/// n independent parity outcomes about X drawn with a seeded mt19937_64.
MeasurementRecord simulate_measurements(const WignerField& w, PhasePoint X, std::int64_t n,
                                        std::uint64_t seed);

/// Same draws for a known probability of the +1 outcome.
MeasurementRecord sample_outcomes(PhasePoint X, double p_plus, std::int64_t n,
                                  std::uint64_t seed);

struct WignerEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// W(X) ~ (n+ - n-)/(n pi hbar), with the binomial standard error.
WignerEstimate estimate_wigner_point(const MeasurementRecord& record, double hbar);

/// `X_p,X_q,n_plus,n_minus,seed`
std::string to_csv(const MeasurementRecord& record);
MeasurementRecord parse_record(const std::string& line);

}  // namespace spiky
