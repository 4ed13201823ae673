#include "stats.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "util.hpp"

namespace airtrace {

const char* stat_name(Stat s) {
    switch (s) {
        case Stat::Mean: return "mean";
        case Stat::Std: return "std";
        case Stat::Var: return "var";
        case Stat::Sum: return "sum";
        case Stat::Min: return "min";
        case Stat::Max: return "max";
        case Stat::Median: return "median";
        case Stat::Skewness: return "skewness";
        case Stat::Kurtosis: return "kurtosis";
    }
    return "?";
}

Stat parse_stat(const std::string& name) {
    for (std::size_t i = 0; i < kStatCount; ++i) {
        const Stat s = static_cast<Stat>(i);
        if (name == stat_name(s)) return s;
    }
    raise(Errc::config, "unknown statistic \"" + name + "\"");
}

std::vector<Stat> parse_feature_set(const std::string& csv) {
    std::vector<Stat> set;
    for (const auto& part : split(csv, ',')) {
        const std::string name = trim(part);
        if (name.empty()) continue;
        const Stat s = parse_stat(name);
        if (std::find(set.begin(), set.end(), s) != set.end())
            raise(Errc::config, "duplicate statistic \"" + name + "\" in feature set");
        set.push_back(s);
    }
    if (set.empty()) raise(Errc::config, "feature set is empty");
    return set;
}

const std::vector<Stat>& default_feature_set() {
    static const std::vector<Stat> set = {
        Stat::Mean, Stat::Std,    Stat::Var,      Stat::Min,
        Stat::Max,  Stat::Median, Stat::Skewness, Stat::Kurtosis,
    };
    return set;
}

bool compute_window_stats(std::span<const double> window, std::span<const Stat> stats,
                          std::span<double> out) {
    const std::size_t n = window.size();
    if (n == 0) raise(Errc::insufficient_data, "empty window");
    if (out.size() != stats.size()) raise(Errc::internal, "stats/out length mismatch");

    double mn = window[0];
    double mx = window[0];
    long double sum = 0.0L;
    for (double x : window) {
        mn = std::min(mn, x);
        mx = std::max(mx, x);
        sum += static_cast<long double>(x);
    }

    // A constant window gets exact values; the moment ratios are undefined
    // there and reported as 0 with the degenerate flag.
    const bool degenerate = (mn == mx);
    double mean, var, stddev, skew, kurt;
    if (degenerate) {
        mean = mn;
        sum = static_cast<long double>(mn) * static_cast<long double>(n);
        var = stddev = skew = kurt = 0.0;
    } else {
        mean = static_cast<double>(sum / static_cast<long double>(n));
        long double m2 = 0.0L, m3 = 0.0L, m4 = 0.0L;
        for (double x : window) {
            const long double d = static_cast<long double>(x) - static_cast<long double>(mean);
            const long double d2 = d * d;
            m2 += d2;
            m3 += d2 * d;
            m4 += d2 * d2;
        }
        m2 /= static_cast<long double>(n);
        m3 /= static_cast<long double>(n);
        m4 /= static_cast<long double>(n);
        var = static_cast<double>(m2);
        stddev = std::sqrt(var);
        skew = static_cast<double>(m3 / (m2 * std::sqrt(m2)));
        kurt = static_cast<double>(m4 / (m2 * m2));
    }

    double median = 0.0;
    if (std::find(stats.begin(), stats.end(), Stat::Median) != stats.end()) {
        if (degenerate) {
            median = mn;
        } else {
            std::vector<double> sorted(window.begin(), window.end());
            std::sort(sorted.begin(), sorted.end());
            median = (n % 2 == 1) ? sorted[n / 2]
                                  : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
        }
    }

    for (std::size_t i = 0; i < stats.size(); ++i) {
        switch (stats[i]) {
            case Stat::Mean: out[i] = mean; break;
            case Stat::Std: out[i] = stddev; break;
            case Stat::Var: out[i] = var; break;
            case Stat::Sum: out[i] = static_cast<double>(sum); break;
            case Stat::Min: out[i] = mn; break;
            case Stat::Max: out[i] = mx; break;
            case Stat::Median: out[i] = median; break;
            case Stat::Skewness: out[i] = skew; break;
            case Stat::Kurtosis: out[i] = kurt; break;
        }
    }
    return degenerate;
}

} // namespace airtrace
