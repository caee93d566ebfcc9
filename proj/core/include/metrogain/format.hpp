#pragma once

#include <string>

namespace metrogain {

// Fixed notation with 12 decimals for 1e-3 <= |v| < 1e15 (and 0), scientific
// with 12 decimals otherwise. Locale-independent.
std::string format_number(double v);

// The double that format_number(v) denotes.
double printed_value(double v);

}  // namespace metrogain
