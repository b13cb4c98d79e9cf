#pragma once

// CSV serialization of Wigner and chord fields.
//
//   # hbar=<v>
//   # grid=p_min,p_max,n_p,q_min,q_max,n_q
//   # kind=wigner|chord
//   <n_p rows of n_q values; chord rows hold re,im pairs>
//
// Numbers are written with 17 significant digits, so a write/read cycle
// reproduces every double bit for bit. Unknown comment keys are ignored.

#include <charconv>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <system_error>
#include <vector>

#include "spiky/core.hpp"

namespace spiky {

std::string format_double(double v);
double parse_double(const std::string& text);
std::vector<std::string> split_csv(const std::string& line);

template <class Int>
Int parse_int(const std::string& text) {
    Int v{};
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw FormatError("not an integer: '" + text + "'");
    return v;
}

void write_wigner(std::ostream& out, const WignerField& w);
void write_chord(std::ostream& out, const ChordField& c);
WignerField read_wigner(std::istream& in);
ChordField read_chord(std::istream& in);

void save_wigner(const std::filesystem::path& path, const WignerField& w);
void save_chord(const std::filesystem::path& path, const ChordField& c);
WignerField load_wigner(const std::filesystem::path& path);
ChordField load_chord(const std::filesystem::path& path);

}  // namespace spiky
