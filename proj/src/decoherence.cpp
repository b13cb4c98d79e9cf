#include "spiky/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "spiky/io.hpp"

namespace spiky {

void DiffusionParams::validate() const {
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("coupling c must be positive");
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("hbar must be positive");
}

namespace {

// Probability that node + N(0, sigma^2) leaves [lo, hi].
Eigen::VectorXd escape_probability(double lo, double hi, double step, int n, double sigma) {
    Eigen::VectorXd e(n);
    const double s = sigma * std::sqrt(2.0);
    for (int i = 0; i < n; ++i) {
        const double x = lo + i * step;
        e(i) = 0.5 * std::erfc((x - lo) / s) + 0.5 * std::erfc((hi - x) / s);
    }
    return e;
}

void check_frame(const WignerField& w, const DiffusionParams& params) {
    params.validate();
    if (std::abs(w.hbar - params.hbar) > 1e-14 * params.hbar)
        throw GridMismatch("field hbar differs from diffusion hbar");
}

void apply_kernel(ChordField& c, double t, const DiffusionParams& params) {
    const double rate = params.c * params.c * t / (2.0 * params.hbar);
    for (int l = 0; l < c.grid.n_p; ++l) {
        const double xp = c.grid.p(l);
        for (int k = 0; k < c.grid.n_q; ++k) {
            const double xq = c.grid.q(k);
            c.values(l, k) *= std::exp(-rate * (xp * xp + xq * xq));
        }
    }
}

double field_min(const WignerField& w) { return w.values.minCoeff(); }

}  // namespace

double escaped_mass(const WignerField& w, double sigma) {
    if (sigma <= 0.0) return 0.0;
    const GridSpec& g = w.grid;
    const Eigen::VectorXd ep = escape_probability(g.p_min, g.p_max, g.dp(), g.n_p, sigma);
    const Eigen::VectorXd eq = escape_probability(g.q_min, g.q_max, g.dq(), g.n_q, sigma);
    double total = 0.0;
    for (int i = 0; i < g.n_p; ++i)
        for (int j = 0; j < g.n_q; ++j) {
            const double leave = ep(i) + (1.0 - ep(i)) * eq(j);
            total += std::abs(w.values(i, j)) * leave;
        }
    return total * g.cell_area();
}

WignerField heat_propagate(const WignerField& w, double t, const DiffusionParams& params,
                           int pad_factor) {
    check_frame(w, params);
    if (t < 0.0) throw DomainError("propagation time must be non-negative");
    if (t == 0.0) return w;

    const double sigma = params.c * std::sqrt(params.hbar * t);
    const double lost = escaped_mass(w, sigma);
    if (lost > 1e-9) {
        const GridSpec& g = w.grid;
        std::ostringstream msg;
        msg << "support escapes grid at t=" << t << " (tail mass " << lost
            << "); enlarge the domain to at least p in [" << g.p_min - 6 * sigma << ", "
            << g.p_max + 6 * sigma << "], q in [" << g.q_min - 6 * sigma << ", "
            << g.q_max + 6 * sigma << "]";
        throw DomainError(msg.str());
    }

    ChordField c = wigner_to_chord(w, pad_factor);
    apply_kernel(c, t, params);
    WignerField out = chord_to_wigner(c);
    out.normalized = std::abs(integrate(out) - 1.0) <= 1e-6;
    out.warnings = w.warnings;
    return out;
}

double purity(const WignerField& w) {
    return 2.0 * kPi * w.hbar * w.values.squaredNorm() * w.grid.cell_area();
}

double negativity_volume(const WignerField& w) {
    return 0.5 * (w.values.cwiseAbs() - w.values).sum() * w.grid.cell_area();
}

ThresholdReport positivity_threshold(const WignerField& w0, const DiffusionParams& params,
                                     std::optional<double> t_hi, std::optional<double> epsilon) {
    check_frame(w0, params);
    ThresholdReport report;
    report.epsilon = epsilon.value_or(eps_grid(params.hbar));
    const double upper = t_hi.value_or(4.0 * params.t0());
    if (!(upper > 0.0)) throw DomainError("threshold bracket must be positive");

    const double g0 = field_min(w0);
    report.min_trace.emplace_back(0.0, g0);
    if (g0 >= -report.epsilon) {
        report.t_star = 0.0;
        return report;
    }

    // One forward transform serves every trial time.
    const double sigma = params.c * std::sqrt(params.hbar * upper);
    const double lost = escaped_mass(w0, sigma);
    if (lost > 1e-9) {
        std::ostringstream msg;
        msg << "support escapes grid before the bracket end t=" << upper << " (tail mass "
            << lost << "); enlarge the domain by " << 6 * sigma << " on each side";
        throw DomainError(msg.str());
    }
    const ChordField chord = wigner_to_chord(w0, 2);
    auto g = [&](double t) {
        ChordField c = chord;
        apply_kernel(c, t, params);
        const double m = field_min(chord_to_wigner(c));
        report.min_trace.emplace_back(t, m);
        return m;
    };

    if (g(upper) < -report.epsilon) {
        std::ostringstream msg;
        msg << "bracket [0, " << upper << "] is not sign-changing: field still negative at t_hi";
        throw DomainError(msg.str());
    }
    double lo = 0.0, hi = upper;
    while (hi - lo >= 1e-3 * upper) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) >= -report.epsilon)
            hi = mid;
        else
            lo = mid;
    }
    report.t_star = hi;

    std::sort(report.min_trace.begin(), report.min_trace.end());
    const double slack = 1e-12 / (kPi * params.hbar);
    for (std::size_t k = 1; k < report.min_trace.size(); ++k)
        if (report.min_trace[k].second < report.min_trace[k - 1].second - slack)
            report.monotone = false;
    return report;
}

void write_threshold_report(std::ostream& out, const ThresholdReport& report) {
    out << "t,min_w\n";
    for (const auto& [t, m] : report.min_trace) out << format_double(t) << ',' << format_double(m) << '\n';
    out << "# t_star=" << format_double(report.t_star) << " epsilon=" << format_double(report.epsilon)
        << " monotone=" << (report.monotone ? 1 : 0) << '\n';
}

}  // namespace spiky
