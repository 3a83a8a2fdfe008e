#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bass {

// One optimizer iteration. F is the criterion value of the candidate pattern
// evaluated in that iteration; `accepted` says whether the state moved to
// it. wall_ms is kept at 0 in emitted traces so that reruns of the same
// seed produce byte-identical files; real timings live in run results and
// manifests instead.
struct TraceRow {
    int iter = 0;
    std::int64_t size = 0;
    std::int64_t K = 0;
    double F = 0.0;
    bool accepted = false;
    std::int64_t recon_calls_cum = 0;
    double wall_ms = 0.0;
};

std::string trace_csv_header();
std::string trace_to_csv(const std::vector<TraceRow>& rows);
void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows);

}  // namespace bass
