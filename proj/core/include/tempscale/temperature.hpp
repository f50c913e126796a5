#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace tempscale {

/// Sampling temperature with exactly one fractional digit, stored as an
/// integer count of tenths so that grid stepping never drifts.
class Temperature {
public:
    constexpr Temperature() = default;
    static constexpr Temperature from_tenths(int tenths) { return Temperature(tenths); }
    static Temperature from_value(double v);
    static Temperature parse(const std::string& text);

    constexpr int tenths() const { return tenths_; }
    constexpr double value() const { return tenths_ / 10.0; }
    constexpr bool is_zero() const { return tenths_ == 0; }

    std::string str() const;  // "0.7"

    friend constexpr auto operator<=>(Temperature, Temperature) = default;

private:
    explicit constexpr Temperature(int tenths) : tenths_(tenths) {}
    int tenths_ = 0;
};

}  // namespace tempscale

template <>
struct std::hash<tempscale::Temperature> {
    size_t operator()(tempscale::Temperature t) const noexcept {
        return std::hash<int>{}(t.tenths());
    }
};
