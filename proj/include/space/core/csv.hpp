#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace space::csv {

// Shortest decimal representation that round-trips exactly.
std::string format_double(double value);
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

std::vector<std::string> split(std::string_view line, char delimiter);
std::string join(const std::vector<std::string>& fields, char delimiter);

// Reads the lines of a text file; throws io_error if unreadable.
std::vector<std::string> read_lines(const std::string& path);
// Writes text with LF line endings; throws io_error on failure.
void write_text(const std::string& path, std::string_view text);

}  // namespace space::csv
