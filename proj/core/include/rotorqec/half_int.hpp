#pragma once

#include <compare>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace rotorqec {

/// Half-integer angular momentum value, stored exactly as twice its value.
/// The simulated rotor only uses integers, but the counter-symmetric codes
/// exist for half-integer systems as well, so the algebra layer carries them.
class HalfInt {
public:
    constexpr HalfInt() = default;
    constexpr HalfInt(int integer_value) : twice_(2 * integer_value) {}

    static constexpr HalfInt from_twice(int twice_value) {
        HalfInt h;
        h.twice_ = twice_value;
        return h;
    }

    constexpr int twice() const { return twice_; }
    constexpr bool is_integer() const { return twice_ % 2 == 0; }
    constexpr double value() const { return 0.5 * twice_; }

    /// Integer value; throws for genuine half-integers.
    int as_int() const {
        if (!is_integer())
            throw std::invalid_argument("HalfInt: " + str() + " is not an integer");
        return twice_ / 2;
    }

    std::string str() const {
        if (is_integer()) return std::to_string(twice_ / 2);
        return std::to_string(twice_) + "/2";
    }

    friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return from_twice(a.twice_ + b.twice_); }
    friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return from_twice(a.twice_ - b.twice_); }
    constexpr HalfInt operator-() const { return from_twice(-twice_); }
    friend constexpr auto operator<=>(HalfInt, HalfInt) = default;

private:
    int twice_ = 0;
};

/// m runs over {-j, -j+1, ..., j}: requires |m| <= j and j - m integer.
constexpr bool m_in_ladder(HalfInt j, HalfInt m) {
    return std::abs(m.twice()) <= j.twice() && (j.twice() - m.twice()) % 2 == 0;
}

}  // namespace rotorqec
