#include "spiky/io.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace spiky {

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::general, 17);
    if (ec != std::errc{}) throw FormatError("cannot format number");
    return std::string(buf.data(), ptr);
}

double parse_double(const std::string& text) {
    std::size_t first = text.find_first_not_of(" \t\r");
    std::size_t last = text.find_last_not_of(" \t\r");
    if (first == std::string::npos) throw FormatError("empty numeric field");
    const char* begin = text.data() + first;
    const char* end = text.data() + last + 1;
    if (*begin == '+') ++begin;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end) throw FormatError("not a number: '" + text + "'");
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

namespace {

void write_header(std::ostream& out, double hbar, const GridSpec& g, const char* kind) {
    out << "# hbar=" << format_double(hbar) << '\n';
    out << "# grid=" << format_double(g.p_min) << ',' << format_double(g.p_max) << ',' << g.n_p
        << ',' << format_double(g.q_min) << ',' << format_double(g.q_max) << ',' << g.n_q
        << '\n';
    out << "# kind=" << kind << '\n';
}

GridSpec parse_grid(const std::string& text) {
    const auto cells = split_csv(text);
    if (cells.size() != 6) throw FormatError("grid header needs 6 fields: " + text);
    GridSpec g{parse_double(cells[0]), parse_double(cells[1]), parse_double(cells[3]),
               parse_double(cells[4]), parse_int<int>(cells[2]), parse_int<int>(cells[5])};
    try {
        g.validate();
    } catch (const DomainError& e) {
        throw FormatError(std::string("bad grid header: ") + e.what());
    }
    return g;
}

struct RawField {
    std::map<std::string, std::string> meta;
    std::vector<std::string> warnings;
    std::vector<std::vector<double>> rows;
};

RawField read_raw(std::istream& in) {
    RawField raw;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::size_t start = line.find_first_not_of(" ", 1);
            const std::size_t eq = line.find('=');
            if (start == std::string::npos || eq == std::string::npos) continue;
            const std::string key = line.substr(start, eq - start);
            const std::string value = line.substr(eq + 1);
            if (key == "warning")
                raw.warnings.push_back(value);
            else
                raw.meta[key] = value;
            continue;
        }
        std::vector<double> row;
        for (const auto& cell : split_csv(line)) row.push_back(parse_double(cell));
        raw.rows.push_back(std::move(row));
    }
    for (const char* key : {"hbar", "grid", "kind"})
        if (!raw.meta.count(key)) throw FormatError(std::string("missing header '") + key + "'");
    return raw;
}

void expect_kind(const RawField& raw, const std::string& kind) {
    if (raw.meta.at("kind") != kind)
        throw FormatError("expected kind=" + kind + ", found kind=" + raw.meta.at("kind"));
}

void check_shape(const RawField& raw, int rows, int cols) {
    if (static_cast<int>(raw.rows.size()) != rows)
        throw FormatError("row count does not match grid header");
    for (const auto& r : raw.rows)
        if (static_cast<int>(r.size()) != cols)
            throw FormatError("column count does not match grid header");
}

template <class Fn>
void with_file(const std::filesystem::path& path, std::ios::openmode mode, Fn&& fn) {
    std::fstream f(path, mode);
    if (!f) throw FormatError("cannot open " + path.string());
    fn(f);
}

}  // namespace

void write_wigner(std::ostream& out, const WignerField& w) {
    write_header(out, w.hbar, w.grid, "wigner");
    out << "# normalized=" << (w.normalized ? 1 : 0) << '\n';
    for (const auto& msg : w.warnings) out << "# warning=" << msg << '\n';
    for (int i = 0; i < w.grid.n_p; ++i) {
        for (int j = 0; j < w.grid.n_q; ++j) {
            if (j) out << ',';
            out << format_double(w.values(i, j));
        }
        out << '\n';
    }
}

void write_chord(std::ostream& out, const ChordField& c) {
    write_header(out, c.hbar, c.grid, "chord");
    if (c.source) {
        const GridSpec& s = *c.source;
        out << "# source=" << format_double(s.p_min) << ',' << format_double(s.p_max) << ','
            << s.n_p << ',' << format_double(s.q_min) << ',' << format_double(s.q_max) << ','
            << s.n_q << '\n';
    }
    for (int i = 0; i < c.grid.n_p; ++i) {
        for (int j = 0; j < c.grid.n_q; ++j) {
            if (j) out << ',';
            out << format_double(c.values(i, j).real()) << ',' << format_double(c.values(i, j).imag());
        }
        out << '\n';
    }
}

WignerField read_wigner(std::istream& in) {
    RawField raw = read_raw(in);
    expect_kind(raw, "wigner");
    WignerField w(parse_grid(raw.meta.at("grid")), parse_double(raw.meta.at("hbar")));
    check_shape(raw, w.grid.n_p, w.grid.n_q);
    for (int i = 0; i < w.grid.n_p; ++i)
        for (int j = 0; j < w.grid.n_q; ++j) w.values(i, j) = raw.rows[i][j];
    if (raw.meta.count("normalized")) w.normalized = raw.meta.at("normalized") == "1";
    w.warnings = std::move(raw.warnings);
    return w;
}

ChordField read_chord(std::istream& in) {
    RawField raw = read_raw(in);
    expect_kind(raw, "chord");
    ChordField c;
    c.grid = parse_grid(raw.meta.at("grid"));
    c.grid.validate();
    c.hbar = parse_double(raw.meta.at("hbar"));
    if (raw.meta.count("source")) c.source = parse_grid(raw.meta.at("source"));
    check_shape(raw, c.grid.n_p, 2 * c.grid.n_q);
    c.values.resize(c.grid.n_p, c.grid.n_q);
    for (int i = 0; i < c.grid.n_p; ++i)
        for (int j = 0; j < c.grid.n_q; ++j)
            c.values(i, j) = Complex(raw.rows[i][2 * j], raw.rows[i][2 * j + 1]);
    return c;
}

void save_wigner(const std::filesystem::path& path, const WignerField& w) {
    with_file(path, std::ios::out | std::ios::trunc, [&](std::fstream& f) { write_wigner(f, w); });
}

void save_chord(const std::filesystem::path& path, const ChordField& c) {
    with_file(path, std::ios::out | std::ios::trunc, [&](std::fstream& f) { write_chord(f, c); });
}

WignerField load_wigner(const std::filesystem::path& path) {
    WignerField w;
    with_file(path, std::ios::in, [&](std::fstream& f) { w = read_wigner(f); });
    return w;
}

ChordField load_chord(const std::filesystem::path& path) {
    ChordField c;
    with_file(path, std::ios::in, [&](std::fstream& f) { c = read_chord(f); });
    return c;
}

}  // namespace spiky
