#pragma once

#include <cstddef>
#include <string_view>

namespace smds {

enum class ScheduleKind { fixed, piecewise, frac_t, frac_sqrt_t };

/// Learning-rate schedule over epochs.
///
///   fixed        min(fixed_eta, cap)
///   frac_t       cap / (1 + t)
///   frac_sqrt_t  cap / sqrt(1 + t)
///   piecewise    cap * exp(-decay * t) until it drops below switch_threshold,
///                then a 1/t tail that is continuous at the switch epoch.
struct Schedule {
    ScheduleKind kind = ScheduleKind::piecewise;
    double fixed_eta = 0.05;
    double decay = 0.05;
    double switch_threshold = 0.01;
};

/// Never exceeds lr_cap; t is the 0-based epoch.
[[nodiscard]] double schedule_eta(const Schedule& schedule, double lr_cap, std::size_t t);

[[nodiscard]] std::string_view to_string(ScheduleKind kind) noexcept;
/// Accepts "fixed", "piecewise", "frac-t", "frac-sqrt-t" (underscores too).
[[nodiscard]] ScheduleKind parse_schedule_kind(std::string_view name);

} // namespace smds
