#include "tempscale/temperature.hpp"

#include <cmath>
#include <stdexcept>

namespace tempscale {

Temperature Temperature::from_value(double v) {
    if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument("temperature must be finite and >= 0, got " + std::to_string(v));
    }
    double tenths = v * 10.0;
    long rounded = std::lround(tenths);
    if (std::abs(tenths - static_cast<double>(rounded)) > 1e-6) {
        throw std::invalid_argument("temperature must have one fractional digit, got " + std::to_string(v));
    }
    return Temperature(static_cast<int>(rounded));
}

Temperature Temperature::parse(const std::string& text) {
    size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size()) {
        throw std::invalid_argument("trailing characters in temperature: " + text);
    }
    return from_value(v);
}

std::string Temperature::str() const {
    std::string s = std::to_string(tenths_ / 10);
    s += '.';
    s += static_cast<char>('0' + tenths_ % 10);
    return s;
}

}  // namespace tempscale
