#ifndef AIRTRACE_CORE_CSV_IO_HPP
#define AIRTRACE_CORE_CSV_IO_HPP

#include <optional>
#include <string>
#include <string_view>

#include "trace.hpp"

namespace airtrace {

// Canonical trace format: UTF-8 CSV, mandatory header "timestamp,size",
// timestamps in seconds at microsecond precision, comment lines starting
// with '#' ignored. Rows are sorted by timestamp when needed and the trace
// is rebased so the first record is at 0.
Trace parse_csv_trace(std::string_view text, std::optional<ClassLabel> label = std::nullopt);
Trace load_csv_trace(const std::string& path, std::optional<ClassLabel> label = std::nullopt);

std::string write_csv_trace(const Trace& trace);
void save_csv_trace(const Trace& trace, const std::string& path);

// Column mapping for foreign datasets whose schema differs from the
// canonical one. Fields address columns either positionally ("col0") or by
// header name; time_scale converts the source time unit to seconds.
struct CsvMapping {
    std::string time_field = "timestamp";
    std::string size_field = "size";
    double time_scale = 1.0;
    enum class Header { automatic, yes, no };
    Header header = Header::automatic;

    // Spec syntax: "time=col0,size=col2[,scale=1e-6][,header=no]"
    static CsvMapping parse_spec(const std::string& spec);
};

Trace parse_csv_mapped(std::string_view text, const CsvMapping& mapping,
                       std::optional<ClassLabel> label = std::nullopt);
Trace load_csv_mapped(const std::string& path, const CsvMapping& mapping,
                      std::optional<ClassLabel> label = std::nullopt);

} // namespace airtrace

#endif
