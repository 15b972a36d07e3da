#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "zbrng/error.hpp"

namespace zbrng {

/// Residues modulo a small prime P.
template <unsigned P>
class Zp {
    static_assert(P >= 2 && P < 65536, "small prime expected");

public:
    constexpr Zp() = default;
    constexpr Zp(long long v) : v_(static_cast<unsigned>(((v % static_cast<long long>(P)) + P) % P)) {}

    constexpr unsigned value() const noexcept { return v_; }
    /// Representative in (-P/2, P/2].
    constexpr int centered() const noexcept { return v_ > P / 2 ? static_cast<int>(v_) - static_cast<int>(P) : static_cast<int>(v_); }

    friend constexpr Zp operator+(Zp a, Zp b) { return Zp(static_cast<long long>(a.v_) + b.v_); }
    friend constexpr Zp operator-(Zp a, Zp b) { return Zp(static_cast<long long>(a.v_) + P - b.v_); }
    friend constexpr Zp operator*(Zp a, Zp b) { return Zp(static_cast<long long>(a.v_) * b.v_); }
    constexpr Zp operator-() const { return Zp(static_cast<long long>(P) - v_); }

    Zp inverse() const {
        if (v_ == 0) throw AlgebraError("division by zero modulo " + std::to_string(P));
        // Fermat: a^(P-2)
        Zp result(1), base = *this;
        for (unsigned e = P - 2; e > 0; e >>= 1) {
            if (e & 1U) result = result * base;
            base = base * base;
        }
        return result;
    }
    friend Zp operator/(Zp a, Zp b) { return a * b.inverse(); }

    Zp& operator+=(Zp b) { return *this = *this + b; }
    Zp& operator-=(Zp b) { return *this = *this - b; }
    Zp& operator*=(Zp b) { return *this = *this * b; }

    friend constexpr bool operator==(Zp a, Zp b) { return a.v_ == b.v_; }
    friend constexpr bool is_zero(Zp a) { return a.v_ == 0; }

    friend std::ostream& operator<<(std::ostream& os, Zp a) { return os << a.v_; }

private:
    unsigned v_ = 0;
};

using F2 = Zp<2>;
using F3 = Zp<3>;

} // namespace zbrng
