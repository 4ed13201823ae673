#include "sweep.hpp"

#include <algorithm>

#include "error.hpp"
#include "util.hpp"

namespace airtrace {

std::string WindowSweepCurve::to_csv(const std::string& config_hash) const {
    std::string out;
    write_report_header(out, "window-sweep", config_hash);
    out += "window_size,samples_per_class,accuracy,status\n";
    for (const auto& p : points) {
        std::string status = p.skipped ? "skipped: " + p.note : std::string("ok");
        std::replace(status.begin(), status.end(), ',', ';');
        out += std::to_string(p.window_size) + "," + std::to_string(p.samples_per_class) + "," +
               (p.skipped ? std::string("NA") : format_double(p.accuracy)) + "," + status + "\n";
    }
    return out;
}

WindowSweepCurve sweep_window_sizes(std::span<const Trace> traces,
                                    const std::vector<std::uint32_t>& sizes,
                                    const WindowParams& wtemplate, const ForestParams& fparams) {
    if (sizes.empty()) raise(Errc::config, "window sweep needs at least one size");
    WindowSweepCurve curve;
    for (std::uint32_t n : sizes) {
        WindowSweepPoint point;
        point.window_size = n;
        try {
            WindowParams wp = wtemplate;
            wp.window_size = n;
            if (wp.stride > n) wp.stride = 0; // fall back to tumbling for large N
            const FeatureDataset balanced =
                balance_classes(extract_dataset(traces, wp), fparams.seed);
            const std::size_t per_class =
                balanced.samples.size() / balanced.classes().size();
            point.samples_per_class = per_class;
            if (per_class < fparams.k_folds) {
                point.skipped = true;
                point.note = std::to_string(per_class) + " windows per class, need >= " +
                             std::to_string(fparams.k_folds);
            } else {
                point.accuracy = cross_validate(balanced, fparams).accuracy();
            }
        } catch (const Error& e) {
            point.skipped = true;
            point.note = e.what();
        }
        curve.points.push_back(std::move(point));
    }
    return curve;
}

} // namespace airtrace
