#pragma once

#include <complex>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace meanper::csv {

/// Shortest decimal string that parses back to exactly the same double.
std::string format(double value);

/// Comma-separated rows behind a `# col,col,...` schema comment.
class Writer {
public:
    Writer(std::ostream& out, std::initializer_list<std::string_view> columns);

    Writer& operator<<(double value);
    Writer& operator<<(long long value);
    Writer& operator<<(std::size_t value);
    Writer& operator<<(int value) { return *this << static_cast<long long>(value); }
    Writer& operator<<(std::string_view text);
    /// Ends the current row.
    void row();

private:
    void separator();

    std::ostream& out_;
    bool fresh_ = true;
};

}  // namespace meanper::csv
