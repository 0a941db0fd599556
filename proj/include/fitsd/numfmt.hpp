#pragma once

#include <string>

namespace fitsd {

// Shortest text that reads back to the same double; locale independent.
std::string format_number(double v);

// Whole-string parse; throws InputError naming `what` on failure.
double parse_number(const std::string& text, const std::string& what);

}  // namespace fitsd
