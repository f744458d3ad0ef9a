#pragma once

#include <string>
#include <vector>

namespace a2opt {

// Shortest decimal form that parses back to the identical double.
std::string to_decimal(double v);

// Strict parsers: the whole token must be consumed. Throw std::runtime_error.
double parse_double(const std::string& s);
long parse_long(const std::string& s);

std::vector<std::string> split(const std::string& line, char sep);

}  // namespace a2opt
