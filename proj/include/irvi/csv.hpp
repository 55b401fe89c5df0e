#pragma once

#include "irvi/trace.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace irvi {

// Shortest string that parses back to the same double. NaN is written as an empty field.
std::string format_double(double v);

std::string csv_escape(const std::string& field);

// Columns k, eta_k, projections_cum, wall_nanos followed by `metrics` in order.
void write_trace_csv(std::ostream& out, const IterateTrace& trace,
                     const std::vector<std::string>& metrics);
void write_trace_csv(const std::string& path, const IterateTrace& trace,
                     const std::vector<std::string>& metrics);

} // namespace irvi
