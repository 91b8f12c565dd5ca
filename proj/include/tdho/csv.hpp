#pragma once

// Locale-independent CSV emission; floats use 17 significant digits so that
// every value round-trips.

#include <charconv>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace tdho::csv {

inline std::string number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline std::string number(long long v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string number(int v) { return number(static_cast<long long>(v)); }

class Writer {
public:
    explicit Writer(std::ostream& os) : os_(os) {}

    void header(const std::vector<std::string_view>& cols) {
        bool first = true;
        for (auto c : cols) {
            if (!first) os_ << ',';
            os_ << c;
            first = false;
        }
        os_ << '\n';
    }

    template <class... Ts>
    void row(const Ts&... vals) {
        bool first = true;
        ((os_ << (first ? "" : ",") << cell(vals), first = false), ...);
        os_ << '\n';
    }

private:
    static std::string cell(double v) { return number(v); }
    static std::string cell(int v) { return number(v); }
    static std::string cell(long long v) { return number(v); }
    static std::string cell(std::size_t v) { return number(static_cast<long long>(v)); }
    static std::string cell(bool v) { return v ? "1" : "0"; }
    static std::string cell(const std::string& v) { return v; }
    static std::string cell(const char* v) { return v; }

    std::ostream& os_;
};

}  // namespace tdho::csv
