// spiky: build, evolve and measure phase-space states from the command line.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spiky/analytic.hpp"
#include "spiky/decoherence.hpp"
#include "spiky/io.hpp"
#include "spiky/measurement.hpp"

namespace fs = std::filesystem;
using namespace spiky;

namespace {

enum ExitCode { kOk = 0, kViolation = 1, kUsage = 2, kNumerical = 3, kImpossible = 4 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    double hbar = 0.1;
    double c = 1.0;
    PhasePoint Y{0.0, 1.0};
    int n = 256;
    std::optional<double> half_width;
    std::optional<std::string> t_max;  // grid allowance for diffusion; default 4 t0
    std::uint64_t seed = 1;
    fs::path out_dir = ".";

    double t0() const { return 1.0 / (2.0 * c * c); }
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

PhasePoint parse_point(const std::string& text) {
    const auto cells = split_csv(text);
    if (cells.size() != 2) throw UsageError("expected a point 'p,q', got '" + text + "'");
    try {
        return {parse_double(cells[0]), parse_double(cells[1])};
    } catch (const FormatError&) {
        throw UsageError("expected a point 'p,q', got '" + text + "'");
    }
}

// Accepts a plain number or a multiple of the threshold time: "t0", "3t0", "0.5t0".
double parse_time(const std::string& raw, double t0) {
    const std::string text = trim(raw);
    try {
        if (text.size() >= 2 && text.compare(text.size() - 2, 2, "t0") == 0) {
            const std::string factor = text.substr(0, text.size() - 2);
            return (factor.empty() ? 1.0 : parse_double(factor)) * t0;
        }
        return parse_double(text);
    } catch (const FormatError&) {
        throw UsageError("cannot parse time '" + raw + "'");
    }
}

std::vector<double> parse_time_list(const std::string& text, double t0) {
    std::vector<double> out;
    for (const auto& cell : split_csv(text)) out.push_back(parse_time(cell, t0));
    if (out.empty()) throw UsageError("empty time list");
    return out;
}

// Line-oriented `key = value`; '#' starts a comment.
void load_config(const fs::path& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path.string());
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "hbar")
                cfg.hbar = parse_double(value);
            else if (key == "c")
                cfg.c = parse_double(value);
            else if (key == "Y")
                cfg.Y = parse_point(value);
            else if (key == "n")
                cfg.n = parse_int<int>(value);
            else if (key == "half_width")
                cfg.half_width = parse_double(value);
            else if (key == "t_max")
                cfg.t_max = value;
            else if (key == "seed")
                cfg.seed = parse_int<std::uint64_t>(value);
            else if (key == "out_dir")
                cfg.out_dir = value;
            else
                throw UsageError(path.string() + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        } catch (const FormatError& e) {
            throw UsageError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

GridSpec state_grid(const RunConfig& cfg) {
    if (cfg.half_width) return symmetric_grid(*cfg.half_width, cfg.n);
    const double t_max = cfg.t_max ? parse_time(*cfg.t_max, cfg.t0()) : 4.0 * cfg.t0();
    return default_grid(cfg.Y, cfg.hbar, cfg.n, t_max, cfg.c);
}

fs::path output_path(const RunConfig& cfg, const std::string& given, const std::string& fallback) {
    fs::path p = given.empty() ? fs::path(fallback) : fs::path(given);
    if (p.is_relative() && given.empty()) p = cfg.out_dir / p;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    return p;
}

void write_heatmap_script(const fs::path& csv, const WignerField& w, const std::string& title) {
    fs::path script = csv;
    script.replace_extension(".gp");
    std::ofstream out(script);
    if (!out) throw FormatError("cannot write " + script.string());
    const GridSpec& g = w.grid;
    out << "# gnuplot script for " << csv.filename().string() << "\n"
        << "set datafile separator ','\n"
        << "set title '" << title << "'\n"
        << "set xlabel 'q'\nset ylabel 'p'\n"
        << "set view map\nset size ratio -1\n"
        << "set palette defined (-1 'blue', 0 'white', 1 'red')\n"
        << "set cbrange [" << format_double(-1.0 / (kPi * w.hbar)) << ":" << format_double(1.0 / (kPi * w.hbar))
        << "]\n"
        << "set terminal pngcairo size 900,800\n"
        << "set output '" << csv.stem().string() << ".png'\n"
        << "plot '" << csv.filename().string() << "' matrix using (" << format_double(g.q_min) << "+$1*"
        << format_double(g.dq()) << "):(" << format_double(g.p_min) << "+$2*" << format_double(g.dp())
        << "):3 with image notitle\n";
}

void write_profile_script(const fs::path& csv, const std::string& title) {
    fs::path script = csv;
    script.replace_extension(".gp");
    std::ofstream out(script);
    if (!out) throw FormatError("cannot write " + script.string());
    out << "# gnuplot script for " << csv.filename().string() << "\n"
        << "set datafile separator ','\n"
        << "set title '" << title << "'\n"
        << "set xlabel 's'\nset ylabel 'W'\n"
        << "set key autotitle columnhead\n"
        << "set terminal pngcairo size 900,600\n"
        << "set output '" << csv.stem().string() << ".png'\n"
        << "plot '" << csv.filename().string() << "' using 1:2 with lines lw 2\n";
}

void save_field(const fs::path& path, const WignerField& w, const std::string& title) {
    save_wigner(path, w);
    write_heatmap_script(path, w, title);
    std::cout << "wrote " << path.string() << "\n";
}

// W along the diagonal x = s (1, 1)/sqrt(2) through the origin.
void save_profile(const fs::path& path, const WignerField& w, const std::string& title) {
    const GridSpec& g = w.grid;
    const double reach = std::min({-g.p_min, g.p(g.n_p - 1), -g.q_min, g.q(g.n_q - 1)}) * std::sqrt(2.0);
    const int samples = 801;
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path.string());
    out << "s,W\n";
    for (int k = 0; k < samples; ++k) {
        const double s = -reach + 2.0 * reach * k / (samples - 1);
        const PhasePoint x{s / std::sqrt(2.0), s / std::sqrt(2.0)};
        out << format_double(s) << ',' << format_double(interpolate(w, x)) << '\n';
    }
    write_profile_script(path, title);
    std::cout << "wrote " << path.string() << "\n";
}

void print_summary(const WignerField& w) {
    const Extrema e = field_min_max(w);
    std::cout << "integral " << format_double(integrate(w)) << "\n"
              << "min " << format_double(e.min) << " at (" << e.argmin.p << ", " << e.argmin.q << ")\n"
              << "max " << format_double(e.max) << " at (" << e.argmax.p << ", " << e.argmax.q << ")\n";
    for (const auto& msg : w.warnings) std::cerr << "warning: " << msg << "\n";
}

WignerField build_state(const std::string& kind, const RunConfig& cfg, double t) {
    const GridSpec g = state_grid(cfg);
    if (kind == "coherent")
        return rasterize([&](PhasePoint x) { return coherent_wigner(cfg.Y, cfg.hbar, x); }, g, cfg.hbar);
    if (kind == "cat+" || kind == "cat-") {
        const CatParameters cat{cfg.Y, kind == "cat+" ? Parity::even : Parity::odd, cfg.hbar};
        cat.validate();
        return rasterize([&](PhasePoint x) { return cat_wigner(cat, x); }, g, cfg.hbar);
    }
    if (kind == "evolved-cat")
        return rasterize([&](PhasePoint x) { return evolved_cat_wigner(cfg.Y, t, cfg.c, cfg.hbar, x); }, g, cfg.hbar);
    throw UsageError("unknown state kind '" + kind + "' (coherent, cat+, cat-, evolved-cat)");
}

DiffusionParams diffusion(const RunConfig& cfg, const WignerField& w) { return {cfg.c, w.hbar}; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase-space parity measurement and decoherence toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", "spiky 1.0");

    RunConfig cfg;
    std::string config_file, hbar_s, c_s, Y_s, out_dir_s;
    std::optional<int> n_opt;
    std::optional<double> half_opt;
    std::optional<std::string> tmax_opt;
    std::optional<std::uint64_t> seed_opt;

    app.add_option("--config", config_file, "key = value config file (flags override)");
    app.add_option("--hbar", hbar_s, "Planck constant (default 0.1)");
    app.add_option("--c", c_s, "coupling constant (default 1)");
    app.add_option("--Y", Y_s, "cat / coherent displacement 'P,Q' (default 0,1)");
    app.add_option("--n", n_opt, "grid points per axis (default 256)");
    app.add_option("--half-width", half_opt, "grid half-width (overrides the domain rule)");
    app.add_option("--t-max", tmax_opt, "diffusion time the grid must absorb (default 4t0)");
    app.add_option("--seed", seed_opt, "random seed");
    app.add_option("--out-dir", out_dir_s, "output directory (default .)");

    std::string output, kind, input, X_s = "0,0", sign_s, t_s = "0", t_list_s = "t0,2t0,4t0", figure;
    std::optional<std::int64_t> sample_n;
    std::optional<std::string> t_hi_s;
    std::optional<double> eps_opt;
    std::int64_t n_draws = 0;
    bool profile = false;

    auto* state = app.add_subcommand("state", "rasterize a closed-form state");
    state->add_option("kind", kind, "coherent | cat+ | cat- | evolved-cat")->required();
    state->add_option("--t", t_s, "evolution time for evolved-cat (number or multiple of t0)");
    state->add_option("-o,--output", output, "output CSV");

    auto* measure = app.add_subcommand("measure", "parity measurement about X");
    measure->add_option("input", input, "Wigner field CSV")->required()->check(CLI::ExistingFile);
    measure->add_option("--X", X_s, "reflection centre 'p,q' (default 0,0)");
    auto* sign_opt = measure->add_option("--sign", sign_s, "outcome to condition on: + or -");
    auto* sample_opt = measure->add_option("--sample", sample_n, "simulate n outcomes instead of projecting");
    sign_opt->excludes(sample_opt);
    measure->add_flag("--profile", profile, "also write the diagonal profile of the projected field");
    measure->add_option("-o,--output", output, "output file");

    auto* evolve = app.add_subcommand("evolve", "Gaussian decoherence for a time t");
    evolve->add_option("input", input, "Wigner field CSV")->required()->check(CLI::ExistingFile);
    evolve->add_option("--t", t_s, "time (number or multiple of t0)")->required();
    evolve->add_option("-o,--output", output, "output CSV");

    auto* scan = app.add_subcommand("scan-threshold", "bisect for the positivity threshold");
    scan->add_option("input", input, "Wigner field CSV")->required()->check(CLI::ExistingFile);
    scan->add_option("--t-hi", t_hi_s, "bracket end (default 4t0)");
    scan->add_option("--eps", eps_opt, "negativity tolerance (default 1e-6/(pi hbar))");
    scan->add_option("-o,--output", output, "report CSV");

    auto* sample = app.add_subcommand("sample", "simulate repeated parity measurements");
    sample->add_option("input", input, "Wigner field CSV")->required()->check(CLI::ExistingFile);
    sample->add_option("--X", X_s, "reflection centre 'p,q' (default 0,0)");
    sample->add_option("-n,--count", n_draws, "number of outcomes")->required();
    sample->add_option("-o,--output", output, "record CSV");

    auto* conj = app.add_subcommand("conjecture", "even projection of the decohered cat at each t");
    conj->add_option("--t-list", t_list_s, "comma-separated times (default t0,2t0,4t0)");
    conj->add_option("-o,--output", output, "report CSV");

    auto* exp = app.add_subcommand("export", "figure data and plot scripts");
    exp->add_option("figure", figure, "fig1 | fig2 | fig3 | fig4 | all")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (!config_file.empty()) load_config(config_file, cfg);
        try {
            if (!hbar_s.empty()) cfg.hbar = parse_double(hbar_s);
            if (!c_s.empty()) cfg.c = parse_double(c_s);
        } catch (const FormatError& e) {
            throw UsageError(e.what());
        }
        if (!Y_s.empty()) cfg.Y = parse_point(Y_s);
        if (n_opt) cfg.n = *n_opt;
        if (half_opt) cfg.half_width = *half_opt;
        if (tmax_opt) cfg.t_max = *tmax_opt;
        if (seed_opt) cfg.seed = *seed_opt;
        if (!out_dir_s.empty()) cfg.out_dir = out_dir_s;
        if (!(cfg.hbar > 0.0)) throw UsageError("hbar must be positive");
        if (!(cfg.c > 0.0)) throw UsageError("c must be positive");

        if (*state) {
            const double t = parse_time(t_s, cfg.t0());
            const WignerField w = build_state(kind, cfg, t);
            const fs::path path = output_path(cfg, output, "state_" + kind + ".csv");
            save_field(path, w, kind);
            print_summary(w);
        } else if (*measure) {
            const WignerField w = load_wigner(input);
            const PhasePoint X = parse_point(X_s);
            if (sample_n) {
                if (*sample_n <= 0) throw UsageError("--sample needs a positive count");
                const MeasurementRecord r = simulate_measurements(w, X, *sample_n, cfg.seed);
                const WignerEstimate e = estimate_wigner_point(r, w.hbar);
                const fs::path path = output_path(cfg, output, "record.csv");
                std::ofstream(path) << "X_p,X_q,n_plus,n_minus,seed\n" << to_csv(r) << '\n';
                std::cout << "wrote " << path.string() << "\n"
                          << "estimate " << format_double(e.estimate) << " +- " << format_double(e.std_error) << "\n";
            } else {
                if (sign_s.empty()) throw UsageError("measure needs --sign or --sample");
                const Parity s = parse_parity(sign_s);
                const OutcomeProbabilities p = parity_probabilities(w, X);
                const WignerField out = project_parity(w, X, s);
                const fs::path path = output_path(cfg, output, std::string("measured_") + (s == Parity::even ? "even" : "odd") + ".csv");
                save_field(path, out, "parity " + to_string(s) + " about X");
                if (profile) {
                    fs::path prof = path;
                    prof.replace_filename(path.stem().string() + "_profile.csv");
                    save_profile(prof, out, "diagonal profile");
                }
                std::cout << "p+ " << format_double(p.plus) << "\np- " << format_double(p.minus) << "\n";
                print_summary(out);
            }
        } else if (*evolve) {
            const WignerField w = load_wigner(input);
            const double t = parse_time(t_s, cfg.t0());
            const WignerField out = heat_propagate(w, t, diffusion(cfg, w));
            const fs::path path = output_path(cfg, output, "evolved.csv");
            save_field(path, out, "decohered");
            print_summary(out);
        } else if (*scan) {
            const WignerField w = load_wigner(input);
            std::optional<double> t_hi;
            if (t_hi_s) t_hi = parse_time(*t_hi_s, cfg.t0());
            const ThresholdReport r = positivity_threshold(w, diffusion(cfg, w), t_hi, eps_opt);
            const fs::path path = output_path(cfg, output, "threshold.csv");
            std::ofstream out(path);
            write_threshold_report(out, r);
            std::cout << "wrote " << path.string() << "\n"
                      << "t_star " << format_double(r.t_star) << "\nmonotone " << (r.monotone ? "yes" : "no") << "\n";
        } else if (*sample) {
            if (n_draws <= 0) throw UsageError("--count must be positive");
            const WignerField w = load_wigner(input);
            const MeasurementRecord r = simulate_measurements(w, parse_point(X_s), n_draws, cfg.seed);
            const WignerEstimate e = estimate_wigner_point(r, w.hbar);
            const fs::path path = output_path(cfg, output, "record.csv");
            std::ofstream(path) << "X_p,X_q,n_plus,n_minus,seed\n" << to_csv(r) << '\n';
            std::cout << "wrote " << path.string() << "\n"
                      << "estimate " << format_double(e.estimate) << " +- " << format_double(e.std_error) << "\n";
        } else if (*conj) {
            const std::vector<double> times = parse_time_list(t_list_s, cfg.t0());
            double t_needed = 0.0;
            for (double t : times) t_needed = std::max(t_needed, t);
            RunConfig grid_cfg = cfg;
            if (!grid_cfg.t_max && !grid_cfg.half_width) grid_cfg.t_max = format_double(std::max(t_needed, 4.0 * cfg.t0()));
            const WignerField cat = build_state("cat-", grid_cfg, 0.0);
            const DiffusionParams params{cfg.c, cfg.hbar};
            const double eps = eps_grid(cfg.hbar);
            const fs::path path = output_path(cfg, output, "conjecture.csv");
            std::ofstream out(path);
            out << "t,min_w,argmin_p,argmin_q,negativity_volume,p_plus,violation\n";
            bool violated = false;
            for (double t : times) {
                const WignerField w = heat_propagate(cat, t, params);
                const WignerField even = project_parity(w, {0, 0}, Parity::even);
                const Extrema e = field_min_max(even);
                const bool bad = !(e.min < -eps);
                violated = violated || bad;
                out << format_double(t) << ',' << format_double(e.min) << ',' << format_double(e.argmin.p) << ','
                    << format_double(e.argmin.q) << ',' << format_double(negativity_volume(even)) << ','
                    << format_double(parity_probabilities(w, {0, 0}).plus) << ',' << (bad ? 1 : 0) << '\n';
                std::cout << "t " << format_double(t) << "  min W+ " << format_double(e.min)
                          << (bad ? "  (not below -eps_grid)" : "") << "\n";
            }
            out << "# eps_grid=" << format_double(eps) << '\n';
            std::cout << "wrote " << path.string() << "\n";
            if (violated) {
                std::cerr << "conjecture violated at grid precision for at least one t\n";
                return kViolation;
            }
        } else if (*exp) {
            const bool all = figure == "all";
            if (!all && figure != "fig1" && figure != "fig2" && figure != "fig3" && figure != "fig4")
                throw UsageError("unknown figure '" + figure + "' (fig1, fig2, fig3, fig4, all)");
            const DiffusionParams params{cfg.c, cfg.hbar};
            const WignerField cat = build_state("cat-", cfg, 0.0);
            if (all || figure == "fig1") {
                save_field(output_path(cfg, "", "fig1_odd_cat.csv"), cat, "odd cat");
                save_profile(output_path(cfg, "", "fig1_profile.csv"), cat, "odd cat, diagonal");
            }
            if (all || figure == "fig2" || figure == "fig3") {
                const WignerField fig2 = heat_propagate(cat, cfg.t0(), params);
                if (all || figure == "fig2") {
                    save_field(output_path(cfg, "", "fig2_threshold.csv"), fig2, "decohered cat at t0");
                    save_profile(output_path(cfg, "", "fig2_profile.csv"), fig2, "decohered cat at t0, diagonal");
                }
                if (all || figure == "fig3") {
                    const WignerField fig3 = project_parity(fig2, {0, 0}, Parity::odd);
                    save_field(output_path(cfg, "", "fig3_odd_measurement.csv"), fig3, "odd measurement at t0");
                    save_profile(output_path(cfg, "", "fig3_profile.csv"), fig3, "odd measurement, diagonal");
                }
            }
            if (all || figure == "fig4") {
                const WignerField fig4 = project_parity(heat_propagate(cat, 3.0 * cfg.t0(), params), {0, 0}, Parity::even);
                save_field(output_path(cfg, "", "fig4_even_measurement.csv"), fig4, "even measurement at 3 t0");
                save_profile(output_path(cfg, "", "fig4_profile.csv"), fig4, "even measurement at 3 t0, diagonal");
            }
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ImpossibleOutcome& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kImpossible;
    } catch (const FormatError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumerical;
    }
    return kOk;
}
