#ifndef AIRTRACE_CORE_SWEEP_HPP
#define AIRTRACE_CORE_SWEEP_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eval.hpp"
#include "trace.hpp"

namespace airtrace {

struct WindowSweepPoint {
    std::uint32_t window_size = 0;
    bool skipped = false;
    std::string note; // skip reason, empty for usable rows
    double accuracy = 0.0;
    std::size_t samples_per_class = 0;
};

struct WindowSweepCurve {
    std::vector<WindowSweepPoint> points;
    std::string to_csv(const std::string& config_hash) const;
};

// Accuracy as a function of window size: for each N, extract features with
// the template params (window_size overridden), balance classes, and
// cross-validate. Sizes that leave any class with fewer windows than the
// fold count are recorded as skipped rows instead of aborting the sweep.
WindowSweepCurve sweep_window_sizes(std::span<const Trace> traces,
                                    const std::vector<std::uint32_t>& sizes,
                                    const WindowParams& wtemplate, const ForestParams& fparams);

} // namespace airtrace

#endif
