#ifndef AIRTRACE_CORE_UTIL_HPP
#define AIRTRACE_CORE_UTIL_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace airtrace {

// Timestamp format of the canonical trace CSV: seconds, microsecond precision.
std::string format_timestamp(double seconds);

// Shortest decimal that round-trips the double (used in reports and JSON-free CSVs).
std::string format_double(double v);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

// Leading metadata block shared by all report CSVs.
void write_report_header(std::ostream& os, std::string_view kind, std::string_view config_hash);
void write_report_header(std::string& out, std::string_view kind, std::string_view config_hash);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

} // namespace airtrace

#endif
