#include "meanper/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace meanper::csv {

std::string format(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) value = 0.0;  // folds -0
    std::array<char, 64> buffer;
    const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return std::string(buffer.data(), result.ptr);
}

Writer::Writer(std::ostream& out, std::initializer_list<std::string_view> columns) : out_(out) {
    out_ << "# ";
    bool first = true;
    for (auto column : columns) {
        if (!first) out_ << ',';
        out_ << column;
        first = false;
    }
    out_ << '\n';
}

void Writer::separator() {
    if (!fresh_) out_ << ',';
    fresh_ = false;
}

Writer& Writer::operator<<(double value) {
    separator();
    out_ << format(value);
    return *this;
}

Writer& Writer::operator<<(long long value) {
    separator();
    out_ << value;
    return *this;
}

Writer& Writer::operator<<(std::size_t value) {
    separator();
    out_ << value;
    return *this;
}

Writer& Writer::operator<<(std::string_view text) {
    separator();
    out_ << text;
    return *this;
}

void Writer::row() {
    out_ << '\n';
    fresh_ = true;
}

}  // namespace meanper::csv
