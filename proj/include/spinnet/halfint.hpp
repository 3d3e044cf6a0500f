#pragma once

#include "spinnet/error.hpp"

#include <charconv>
#include <compare>
#include <cstdlib>
#include <string>
#include <string_view>

namespace spinnet {

/// A spin or projection quantum number, stored as its doubled integer value.
class HalfInt {
  public:
    constexpr HalfInt() = default;

    static constexpr HalfInt from_twice(int twice) noexcept { return HalfInt(twice); }
    static constexpr HalfInt integer(int value) noexcept { return HalfInt(2 * value); }

    /// Accepts "n", "-n" or "n/2".
    static HalfInt parse(std::string_view text) {
        auto fail = [&] { return Error(ErrorKind::MalformedSpin, "cannot parse spin '" + std::string(text) + "'"); };
        while (!text.empty() && text.front() == ' ')
            text.remove_prefix(1);
        while (!text.empty() && text.back() == ' ')
            text.remove_suffix(1);
        if (text.empty())
            throw fail();
        std::string_view num = text;
        bool halved = false;
        if (auto slash = text.find('/'); slash != std::string_view::npos) {
            if (text.substr(slash + 1) != "2")
                throw fail();
            num = text.substr(0, slash);
            halved = true;
        }
        if (!num.empty() && num.front() == '+')
            num.remove_prefix(1);
        int value = 0;
        auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
        if (ec != std::errc() || ptr != num.data() + num.size() || num.empty())
            throw fail();
        if (!halved) {
            if (value > (1 << 28) || value < -(1 << 28))
                throw fail();
            return integer(value);
        }
        return from_twice(value);
    }

    constexpr int twice() const noexcept { return twice_; }
    constexpr bool is_integer() const noexcept { return twice_ % 2 == 0; }
    constexpr double to_double() const noexcept { return twice_ / 2.0; }

    std::string to_string() const {
        if (is_integer())
            return std::to_string(twice_ / 2);
        return std::to_string(twice_) + "/2";
    }

    constexpr HalfInt operator-() const noexcept { return HalfInt(-twice_); }
    constexpr HalfInt operator+(HalfInt o) const noexcept { return HalfInt(twice_ + o.twice_); }
    constexpr HalfInt operator-(HalfInt o) const noexcept { return HalfInt(twice_ - o.twice_); }
    constexpr HalfInt operator*(int k) const noexcept { return HalfInt(twice_ * k); }

    constexpr auto operator<=>(const HalfInt &) const = default;

  private:
    constexpr explicit HalfInt(int twice) noexcept : twice_(twice) {}
    int twice_ = 0;
};

namespace literals {
/// 3_hj is 3/2, 2_hj is 1.
constexpr HalfInt operator""_hj(unsigned long long twice) { return HalfInt::from_twice(static_cast<int>(twice)); }
} // namespace literals

inline void require_magnitude(HalfInt j, std::string_view what = "spin") {
    if (j.twice() < 0)
        throw Error(ErrorKind::MalformedSpin, std::string(what) + " " + j.to_string() + " is negative");
}

inline void require_pair(HalfInt j, HalfInt m) {
    require_magnitude(j);
    if ((j.twice() - m.twice()) % 2 != 0)
        throw Error(ErrorKind::MalformedSpin, "projection " + m.to_string() + " has the wrong parity for j = " + j.to_string());
}

} // namespace spinnet
