#pragma once

#include "irvi/linops.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace irvi {

struct IterateRecord {
    long k = 0;
    Point x;
    Point y;
    Point ybar;
    double eta = 0.0;
    std::int64_t projections = 0;
    std::map<std::string, double> metrics;
    std::int64_t wall_nanos = 0;
};

struct IterateTrace {
    std::vector<IterateRecord> records;
    bool diverged = false;
    std::string message;
    // The point the algorithm returns.
    Point solution;

    const IterateRecord& back() const { return records.back(); }
    std::vector<double> metric(const std::string& name) const;
};

// Invoked once per logged iteration; may add entries to record.metrics.
using IterationCallback = std::function<void(IterateRecord&)>;

struct RunOptions {
    IterationCallback on_iteration;
    // Drop x, y, ybar from stored records after the callback has seen them.
    bool keep_points = true;
    // When false wall_nanos is always 0, making traces byte-reproducible.
    bool wall_clock = true;
};

class WallClock {
public:
    explicit WallClock(bool enabled) : enabled_(enabled), start_(std::chrono::steady_clock::now()) {}
    std::int64_t nanos() const {
        if (!enabled_) return 0;
        return std::chrono::duration_cast<std::chrono::nanoseconds>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    bool enabled_;
    std::chrono::steady_clock::time_point start_;
};

// Shared tail of every solver loop: callback, point dropping, append.
void commit_record(IterateTrace& trace, IterateRecord rec, const RunOptions& opts);

} // namespace irvi
