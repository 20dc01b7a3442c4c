#pragma once

#include <string>
#include <string_view>

namespace congest::cli {

// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

// Whole-field parse; throws Error(kIO) naming `what` on failure.
double parse_double(std::string_view text, std::string_view what);
long long parse_integer(std::string_view text, std::string_view what);

std::string_view trim(std::string_view s);

}  // namespace congest::cli
