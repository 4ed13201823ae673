#ifndef AIRTRACE_CORE_LABEL_HPP
#define AIRTRACE_CORE_LABEL_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace airtrace {

enum class Device : std::uint8_t {
    EchoDot = 0,
    Echo = 1,
    GoogleNestMini = 2,
    Synthetic = 3, // parameterized family, one class per synth_id
    Noise = 4,
};

enum class Service : std::uint8_t {
    Music = 0,
    News = 1,
    None = 2,
};

// (device, service) class identity. Noise always carries service None.
class ClassLabel {
public:
    ClassLabel() : device_(Device::Noise), service_(Service::None), synth_id_(0) {}
    ClassLabel(Device device, Service service, std::uint32_t synth_id = 0);

    // Accepts "EchoDot", "Echo", "GoogleNestMini", "Noise", "Synthetic-<k>".
    static ClassLabel parse(const std::string& device, const std::string& service);
    // Inverse of display(): "EchoDot Music", "Noise", ...
    static ClassLabel parse_display(const std::string& text);

    Device device() const noexcept { return device_; }
    Service service() const noexcept { return service_; }
    std::uint32_t synth_id() const noexcept { return synth_id_; }

    std::string device_name() const;
    std::string service_name() const;
    std::string display() const; // "EchoDot Music"

    static ClassLabel noise() { return ClassLabel(Device::Noise, Service::None); }
    static ClassLabel synthetic(std::uint32_t k, Service service = Service::None) {
        return ClassLabel(Device::Synthetic, service, k);
    }

    friend auto operator<=>(const ClassLabel& a, const ClassLabel& b) {
        if (auto c = a.device_ <=> b.device_; c != 0) return c;
        if (auto c = a.synth_id_ <=> b.synth_id_; c != 0) return c;
        return a.service_ <=> b.service_;
    }
    friend bool operator==(const ClassLabel&, const ClassLabel&) = default;

private:
    Device device_;
    Service service_;
    std::uint32_t synth_id_;
};

// Sorted unique labels of a sample sequence.
template <typename It, typename Proj>
std::vector<ClassLabel> collect_classes(It begin, It end, Proj proj) {
    std::vector<ClassLabel> classes;
    for (It it = begin; it != end; ++it) {
        const ClassLabel& l = proj(*it);
        bool found = false;
        for (const auto& c : classes)
            if (c == l) { found = true; break; }
        if (!found) classes.push_back(l);
    }
    std::sort(classes.begin(), classes.end());
    return classes;
}

} // namespace airtrace

#endif
