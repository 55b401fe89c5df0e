#include "irvi/csv.hpp"

#include "irvi/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace irvi {

std::string format_double(double v) {
    if (std::isnan(v)) return "";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_trace_csv(std::ostream& out, const IterateTrace& trace,
                     const std::vector<std::string>& metrics) {
    out << "k,eta_k,projections_cum,wall_nanos";
    for (const auto& m : metrics) out << ',' << csv_escape(m);
    out << "\r\n";
    for (const auto& r : trace.records) {
        out << r.k << ',' << format_double(r.eta) << ',' << r.projections << ',' << r.wall_nanos;
        for (const auto& m : metrics) {
            out << ',';
            auto it = r.metrics.find(m);
            if (it != r.metrics.end()) out << format_double(it->second);
        }
        out << "\r\n";
    }
}

void write_trace_csv(const std::string& path, const IterateTrace& trace,
                     const std::vector<std::string>& metrics) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    write_trace_csv(f, trace, metrics);
}

} // namespace irvi
