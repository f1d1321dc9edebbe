#pragma once

// Small helpers for the CSV artifacts. Doubles are written in shortest
// round-trip form so reruns are byte-identical and reloads are exact.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace linkinfer::csv {

std::string format(double value);
double parse_double(std::string_view field);
std::uint64_t parse_uint(std::string_view field);
std::vector<std::string_view> split(std::string_view line, char sep = ',');

}  // namespace linkinfer::csv
