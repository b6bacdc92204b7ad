#pragma once

#include <array>
#include <charconv>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace dtpt::csv {

/// Shortest round-trip representation, so identical doubles always produce
/// identical bytes.  Negative zero prints as 0.
inline std::string num(double v) {
    if (v == 0.0) v = 0.0;
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

inline std::string num(long long v) { return std::to_string(v); }

/// Writes each line of `comment` prefixed with "# ".
inline void write_comment(std::ostream& os, std::string_view comment) {
    if (comment.empty()) return;
    std::size_t pos = 0;
    while (pos <= comment.size()) {
        const auto nl = comment.find('\n', pos);
        const auto line = comment.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        if (!(line.empty() && nl == std::string_view::npos)) os << "# " << line << '\n';
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
}

inline void write_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << cells[i];
    }
    os << '\n';
}

}  // namespace dtpt::csv
