#include "label.hpp"

#include <algorithm>
#include <charconv>

#include "error.hpp"

namespace airtrace {

ClassLabel::ClassLabel(Device device, Service service, std::uint32_t synth_id)
    : device_(device), service_(service), synth_id_(synth_id) {
    if (device_ == Device::Noise && service_ != Service::None)
        raise(Errc::invalid_argument, "Noise carries service None, got " + service_name());
    if (device_ != Device::Synthetic) synth_id_ = 0;
}

ClassLabel ClassLabel::parse(const std::string& device, const std::string& service) {
    Service svc;
    if (service == "Music") svc = Service::Music;
    else if (service == "News") svc = Service::News;
    else if (service == "None" || service.empty()) svc = Service::None;
    else raise(Errc::invalid_argument, "unknown service: " + service);

    if (device == "EchoDot") return ClassLabel(Device::EchoDot, svc);
    if (device == "Echo") return ClassLabel(Device::Echo, svc);
    if (device == "GoogleNestMini") return ClassLabel(Device::GoogleNestMini, svc);
    if (device == "Noise") return ClassLabel(Device::Noise, svc);
    if (device.rfind("Synthetic-", 0) == 0) {
        const std::string num = device.substr(10);
        std::uint32_t k = 0;
        auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), k);
        if (ec != std::errc{} || p != num.data() + num.size())
            raise(Errc::invalid_argument, "bad synthetic class index: " + device);
        return ClassLabel(Device::Synthetic, svc, k);
    }
    raise(Errc::invalid_argument, "unknown device: " + device);
}

ClassLabel ClassLabel::parse_display(const std::string& text) {
    const std::size_t sp = text.find(' ');
    if (sp == std::string::npos) return parse(text, "None");
    return parse(text.substr(0, sp), text.substr(sp + 1));
}

std::string ClassLabel::device_name() const {
    switch (device_) {
        case Device::EchoDot: return "EchoDot";
        case Device::Echo: return "Echo";
        case Device::GoogleNestMini: return "GoogleNestMini";
        case Device::Synthetic: return "Synthetic-" + std::to_string(synth_id_);
        case Device::Noise: return "Noise";
    }
    return "?";
}

std::string ClassLabel::service_name() const {
    switch (service_) {
        case Service::Music: return "Music";
        case Service::News: return "News";
        case Service::None: return "None";
    }
    return "?";
}

std::string ClassLabel::display() const {
    if (service_ == Service::None) return device_name();
    return device_name() + " " + service_name();
}

} // namespace airtrace
