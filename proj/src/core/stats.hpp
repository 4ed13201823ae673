#ifndef AIRTRACE_CORE_STATS_HPP
#define AIRTRACE_CORE_STATS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace airtrace {

// Statistics computable per window. var is the population central second
// moment m2, std its square root; skewness = m3/m2^1.5 and kurtosis =
// m4/m2^2 (non-excess), both 0 on zero-variance windows.
enum class Stat : std::uint8_t {
    Mean = 0,
    Std,
    Var,
    Sum,
    Min,
    Max,
    Median,
    Skewness,
    Kurtosis,
};

inline constexpr std::size_t kStatCount = 9;

const char* stat_name(Stat s);
Stat parse_stat(const std::string& name);

// Comma-separated list, e.g. "mean,std,var". Order is preserved;
// duplicates are an error.
std::vector<Stat> parse_feature_set(const std::string& csv);

// The default 8-statistic set (sum excluded).
const std::vector<Stat>& default_feature_set();

// Computes the requested statistics of `window` into `out` (same length as
// `stats`). Returns true when the window is degenerate (zero variance).
bool compute_window_stats(std::span<const double> window, std::span<const Stat> stats,
                          std::span<double> out);

} // namespace airtrace

#endif
