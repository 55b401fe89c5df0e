#include "irvi/trace.hpp"

#include "irvi/errors.hpp"

#include <limits>

namespace irvi {

std::vector<double> IterateTrace::metric(const std::string& name) const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        auto it = r.metrics.find(name);
        out.push_back(it == r.metrics.end() ? std::numeric_limits<double>::quiet_NaN()
                                            : it->second);
    }
    return out;
}

void commit_record(IterateTrace& trace, IterateRecord rec, const RunOptions& opts) {
    if (opts.on_iteration) opts.on_iteration(rec);
    if (!opts.keep_points) {
        rec.x = Point();
        rec.y = Point();
        rec.ybar = Point();
    }
    trace.records.push_back(std::move(rec));
}

} // namespace irvi
