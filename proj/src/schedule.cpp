#include <smds/schedule.hpp>

#include <smds/error.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace smds {

double schedule_eta(const Schedule& schedule, double lr_cap, std::size_t t) {
    const double tt = static_cast<double>(t);
    switch (schedule.kind) {
    case ScheduleKind::fixed: return std::min(schedule.fixed_eta, lr_cap);
    case ScheduleKind::frac_t: return lr_cap / (1.0 + tt);
    case ScheduleKind::frac_sqrt_t: return lr_cap / std::sqrt(1.0 + tt);
    case ScheduleKind::piecewise: break;
    }
    const double threshold = std::min(schedule.switch_threshold, lr_cap);
    if (!(schedule.decay > 0.0)) return lr_cap;
    // Real-valued epoch at which the exponential reaches the threshold.
    const double t_switch = std::log(lr_cap / threshold) / schedule.decay;
    if (tt < t_switch) return lr_cap * std::exp(-schedule.decay * tt);
    return threshold * (1.0 + t_switch) / (1.0 + tt);
}

std::string_view to_string(ScheduleKind kind) noexcept {
    switch (kind) {
    case ScheduleKind::fixed: return "fixed";
    case ScheduleKind::piecewise: return "piecewise";
    case ScheduleKind::frac_t: return "frac-t";
    case ScheduleKind::frac_sqrt_t: return "frac-sqrt-t";
    }
    return "piecewise";
}

ScheduleKind parse_schedule_kind(std::string_view name) {
    std::string key(name);
    std::replace(key.begin(), key.end(), '_', '-');
    for (auto k : {ScheduleKind::fixed, ScheduleKind::piecewise, ScheduleKind::frac_t, ScheduleKind::frac_sqrt_t})
        if (to_string(k) == key) return k;
    throw InputError("unknown schedule '" + std::string(name) + "'");
}

} // namespace smds
