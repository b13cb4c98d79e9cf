#include "spiky/measurement.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "spiky/io.hpp"

namespace spiky {

OutcomeProbabilities parity_probabilities(const WignerField& w, PhasePoint X) {
    const double r = kPi * w.hbar * interpolate(w, X);
    if (std::abs(r) > 1.0 + 1e-6) {
        std::ostringstream msg;
        msg << "unphysical field: |pi hbar W(X)| = " << std::abs(r) << " exceeds 1";
        throw DomainError(msg.str());
    }
    const double clamped = std::clamp(r, -1.0, 1.0);
    return {0.5 * (1.0 + clamped), 0.5 * (1.0 - clamped)};
}

namespace {

// Re{ W~(2(X - x)) exp(-(2i/hbar) x.J X) } at every node x.
RealMatrix reflected_chord_term(const WignerField& w, PhasePoint X) {
    const GridSpec& g = w.grid;
    const double h = w.hbar;
    // Row i (output p_i) against column b (source q_b) and row j (output q_j)
    // against column a (source p_a); the J pairing swaps the axes.
    ComplexMatrix eq(g.n_p, g.n_q);
    for (int i = 0; i < g.n_p; ++i) {
        const double u_p = 2.0 * (X.p - g.p(i));
        for (int b = 0; b < g.n_q; ++b) eq(i, b) = std::polar(1.0, g.q(b) * u_p / h);
    }
    ComplexMatrix ep(g.n_q, g.n_p);
    for (int j = 0; j < g.n_q; ++j) {
        const double u_q = 2.0 * (X.q - g.q(j));
        for (int a = 0; a < g.n_p; ++a) ep(j, a) = std::polar(1.0, -g.p(a) * u_q / h);
    }
    const ComplexMatrix inner = w.values.transpose().cast<Complex>() * ep.transpose();
    const ComplexMatrix sums = eq * inner;

    const double weight = g.cell_area() / (2.0 * kPi * h);
    RealMatrix out(g.n_p, g.n_q);
    for (int i = 0; i < g.n_p; ++i)
        for (int j = 0; j < g.n_q; ++j) {
            const double phase = -2.0 * symplectic_product(g.node(i, j), X) / h;
            out(i, j) = weight * (sums(i, j) * std::polar(1.0, phase)).real();
        }
    return out;
}

}  // namespace

WignerField project_parity(const WignerField& w, PhasePoint X, Parity sign,
                           const ProjectionOptions& options) {
    const double s = sign_of(sign);
    const double r = kPi * w.hbar * interpolate(w, X);
    const OutcomeProbabilities probs = parity_probabilities(w, X);
    if (probs.of(sign) < options.p_floor) {
        std::ostringstream msg;
        msg << "impossible outcome: probability of parity " << to_string(sign) << " is "
            << probs.of(sign);
        throw ImpossibleOutcome(msg.str());
    }

    WignerField out(w.grid, w.hbar);
    out.values = (w.values + reflected_values(w, X) + 4.0 * s * reflected_chord_term(w, X)) /
                 (2.0 * (1.0 + s * r));
    out.normalized = std::abs(integrate(out) - 1.0) <= 1e-6;
    out.warnings = w.warnings;
    return out;
}

MeasurementRecord sample_outcomes(PhasePoint X, double p_plus, std::int64_t n,
                                  std::uint64_t seed) {
    if (n <= 0) throw DomainError("sample size must be positive");
    if (!(p_plus >= 0.0 && p_plus <= 1.0)) throw DomainError("probability outside [0, 1]");
    std::mt19937_64 rng(seed);
    MeasurementRecord rec;
    rec.X = X;
    rec.seed = seed;
    for (std::int64_t k = 0; k < n; ++k) {
        // 53 random bits -> uniform in [0, 1); portable, unlike the
        // standard distributions.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < p_plus)
            ++rec.n_plus;
        else
            ++rec.n_minus;
    }
    return rec;
}

MeasurementRecord simulate_measurements(const WignerField& w, PhasePoint X, std::int64_t n,
                                        std::uint64_t seed) {
    if (n <= 0) throw DomainError("sample size must be positive");
    return sample_outcomes(X, parity_probabilities(w, X).plus, n, seed);
}

WignerEstimate estimate_wigner_point(const MeasurementRecord& record, double hbar) {
    const std::int64_t n = record.total();
    if (n <= 0) throw DomainError("record holds no outcomes");
    const double nd = static_cast<double>(n);
    const double p_plus = record.n_plus / nd;
    const double p_minus = record.n_minus / nd;
    WignerEstimate e;
    e.estimate = (record.n_plus - record.n_minus) / (nd * kPi * hbar);
    e.std_error = 2.0 * std::sqrt(p_plus * p_minus / nd) / (kPi * hbar);
    return e;
}

std::string to_csv(const MeasurementRecord& record) {
    std::ostringstream out;
    out << format_double(record.X.p) << ',' << format_double(record.X.q) << ','
        << record.n_plus << ',' << record.n_minus << ',' << record.seed;
    return out.str();
}

MeasurementRecord parse_record(const std::string& line) {
    const std::vector<std::string> cells = split_csv(line);
    if (cells.size() != 5) throw FormatError("measurement record needs 5 fields: " + line);
    MeasurementRecord rec;
    rec.X = {parse_double(cells[0]), parse_double(cells[1])};
    rec.n_plus = parse_int<std::int64_t>(cells[2]);
    rec.n_minus = parse_int<std::int64_t>(cells[3]);
    rec.seed = parse_int<std::uint64_t>(cells[4]);
    if (rec.n_plus < 0 || rec.n_minus < 0) throw FormatError("negative counts in record");
    return rec;
}

}  // namespace spiky
