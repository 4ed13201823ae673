#include "csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "error.hpp"
#include "util.hpp"

namespace airtrace {

namespace {

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
    raise(Errc::parse, "line " + std::to_string(line_no) + ": " + what);
}

bool parse_number(std::string_view field, double& out) {
    const std::string t = trim(field);
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    auto [p, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && p == end && std::isfinite(out);
}

bool parse_size_value(std::string_view field, std::uint32_t& out) {
    double v = 0.0;
    if (!parse_number(field, v)) return false;
    if (v < 1.0 || v != std::floor(v) || v > 4294967295.0) return false;
    out = static_cast<std::uint32_t>(v);
    return true;
}

// Splits the input into (line_no, content) pairs, dropping blank and
// comment lines.
struct CsvLine {
    std::size_t number;
    std::string text;
};

std::vector<CsvLine> content_lines(std::string_view text) {
    std::vector<CsvLine> out;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        ++line_no;
        std::string line(text.substr(start, nl - start));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string trimmed = trim(line);
        if (!trimmed.empty() && trimmed[0] != '#')
            out.push_back({line_no, line});
        start = nl + 1;
        if (nl == text.size()) break;
    }
    return out;
}

Trace finish_trace(std::vector<PacketRecord> records, std::optional<ClassLabel> label) {
    if (records.empty()) raise(Errc::empty_trace, "trace has no records");
    const bool sorted = std::is_sorted(
        records.begin(), records.end(),
        [](const PacketRecord& a, const PacketRecord& b) { return a.timestamp < b.timestamp; });
    if (!sorted)
        std::stable_sort(records.begin(), records.end(),
                         [](const PacketRecord& a, const PacketRecord& b) {
                             return a.timestamp < b.timestamp;
                         });
    return Trace(std::move(records), std::move(label)).rebased();
}

} // namespace

Trace parse_csv_trace(std::string_view text, std::optional<ClassLabel> label) {
    const auto lines = content_lines(text);
    if (lines.empty()) raise(Errc::empty_trace, "empty trace file");

    const auto& header = lines.front();
    const auto cols = split(header.text, ',');
    if (cols.size() != 2 || trim(cols[0]) != "timestamp" || trim(cols[1]) != "size")
        parse_fail(header.number, "expected header \"timestamp,size\", got \"" + header.text + "\"");

    std::vector<PacketRecord> records;
    records.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& ln = lines[i];
        const auto fields = split(ln.text, ',');
        if (fields.size() != 2)
            parse_fail(ln.number, "expected 2 fields, got " + std::to_string(fields.size()));
        double ts = 0.0;
        if (!parse_number(fields[0], ts))
            parse_fail(ln.number, "bad timestamp \"" + trim(fields[0]) + "\"");
        if (ts < 0.0)
            parse_fail(ln.number, "negative timestamp");
        std::uint32_t size = 0;
        if (!parse_size_value(fields[1], size))
            parse_fail(ln.number, "bad size \"" + trim(fields[1]) + "\"");
        records.push_back({ts, size});
    }
    if (records.empty()) raise(Errc::empty_trace, "trace has no records");
    return finish_trace(std::move(records), std::move(label));
}

Trace load_csv_trace(const std::string& path, std::optional<ClassLabel> label) {
    return parse_csv_trace(read_file(path), std::move(label));
}

std::string write_csv_trace(const Trace& trace) {
    std::ostringstream os;
    os << "timestamp,size\n";
    char buf[64];
    for (const auto& r : trace.records()) {
        std::snprintf(buf, sizeof(buf), "%.6f,%u\n", r.timestamp, r.size);
        os << buf;
    }
    return os.str();
}

void save_csv_trace(const Trace& trace, const std::string& path) {
    write_file(path, write_csv_trace(trace));
}

CsvMapping CsvMapping::parse_spec(const std::string& spec) {
    CsvMapping m;
    for (const auto& part : split(spec, ',')) {
        const auto kv = split(part, '=');
        if (kv.size() != 2)
            raise(Errc::config, "bad mapping entry \"" + part + "\" (want key=value)");
        const std::string key = trim(kv[0]);
        const std::string val = trim(kv[1]);
        if (key == "time") {
            m.time_field = val;
        } else if (key == "size") {
            m.size_field = val;
        } else if (key == "scale") {
            double s = 0.0;
            if (!parse_number(val, s) || s <= 0.0)
                raise(Errc::config, "bad time scale \"" + val + "\"");
            m.time_scale = s;
        } else if (key == "header") {
            if (val == "yes") m.header = Header::yes;
            else if (val == "no") m.header = Header::no;
            else if (val == "auto") m.header = Header::automatic;
            else raise(Errc::config, "bad header flag \"" + val + "\" (yes/no/auto)");
        } else {
            raise(Errc::config, "unknown mapping key \"" + key + "\"");
        }
    }
    return m;
}

namespace {

// Resolves a field spec to a column index; "colK" is positional, anything
// else is looked up in the header row.
std::size_t resolve_column(const std::string& field, const std::vector<std::string>* header_cols,
                           std::size_t header_line) {
    if (field.rfind("col", 0) == 0) {
        const std::string num = field.substr(3);
        std::size_t idx = 0;
        auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), idx);
        if (ec == std::errc{} && p == num.data() + num.size()) return idx;
    }
    if (header_cols == nullptr)
        raise(Errc::config, "field \"" + field + "\" needs a header row to resolve");
    for (std::size_t i = 0; i < header_cols->size(); ++i)
        if (trim((*header_cols)[i]) == field) return i;
    raise(Errc::parse, "line " + std::to_string(header_line) + ": no column named \"" + field + "\"");
}

} // namespace

Trace parse_csv_mapped(std::string_view text, const CsvMapping& mapping,
                       std::optional<ClassLabel> label) {
    const auto lines = content_lines(text);
    if (lines.empty()) raise(Errc::empty_trace, "empty trace file");

    // Decide whether the first content line is a header.
    bool has_header = false;
    const auto first_cols = split(lines.front().text, ',');
    switch (mapping.header) {
        case CsvMapping::Header::yes: has_header = true; break;
        case CsvMapping::Header::no: has_header = false; break;
        case CsvMapping::Header::automatic: {
            // Header assumed when any field of the first line is non-numeric.
            has_header = false;
            for (const auto& c : first_cols) {
                double v;
                if (!parse_number(c, v)) { has_header = true; break; }
            }
            break;
        }
    }

    const std::vector<std::string>* header_cols = has_header ? &first_cols : nullptr;
    const std::size_t time_col = resolve_column(mapping.time_field, header_cols, lines.front().number);
    const std::size_t size_col = resolve_column(mapping.size_field, header_cols, lines.front().number);

    std::vector<PacketRecord> records;
    for (std::size_t i = has_header ? 1 : 0; i < lines.size(); ++i) {
        const auto& ln = lines[i];
        const auto fields = split(ln.text, ',');
        const std::size_t need = std::max(time_col, size_col) + 1;
        if (fields.size() < need)
            parse_fail(ln.number, "expected at least " + std::to_string(need) + " fields, got " +
                                      std::to_string(fields.size()));
        double ts = 0.0;
        if (!parse_number(fields[time_col], ts))
            parse_fail(ln.number, "bad timestamp \"" + trim(fields[time_col]) + "\"");
        ts *= mapping.time_scale;
        if (ts < 0.0) parse_fail(ln.number, "negative timestamp");
        std::uint32_t size = 0;
        if (!parse_size_value(fields[size_col], size))
            parse_fail(ln.number, "bad size \"" + trim(fields[size_col]) + "\"");
        records.push_back({ts, size});
    }
    return finish_trace(std::move(records), std::move(label));
}

Trace load_csv_mapped(const std::string& path, const CsvMapping& mapping,
                      std::optional<ClassLabel> label) {
    return parse_csv_mapped(read_file(path), mapping, std::move(label));
}

} // namespace airtrace
