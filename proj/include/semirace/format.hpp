#pragma once

#include <string>

namespace semirace {

// Shortest decimal that parses back to the same double; locale independent.
std::string format_double(double v);

// 17 significant digits, locale independent.
std::string format_double17(double v);

}  // namespace semirace
