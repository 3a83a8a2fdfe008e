#include "optimize/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace bass {

std::string trace_csv_header() { return "iter,size,K,F,accepted,recon_calls_cum,wall_ms"; }

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string trace_to_csv(const std::vector<TraceRow>& rows) {
    std::ostringstream os;
    os << trace_csv_header() << '\n';
    for (const TraceRow& r : rows) {
        os << r.iter << ',' << r.size << ',' << r.K << ',' << format_double(r.F) << ','
           << (r.accepted ? 1 : 0) << ',' << r.recon_calls_cum << ','
           << format_double(r.wall_ms) << '\n';
    }
    return os.str();
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_data_error("cannot open trace file for writing: " + path);
    out << trace_to_csv(rows);
    if (!out) throw_data_error("failed writing trace file: " + path);
}

}  // namespace bass
