#pragma once

// Exact scalars: big rationals and elements of cyclotomic fields Q(zeta_q).
//
// A CycNum of order q is stored in the power basis 1, z, ..., z^(phi(q)-1) of
// Q(zeta_q) = Q[x]/(Phi_q). That basis is a Q-basis, so two values of the same
// order are equal iff their coefficient vectors are equal. Trailing zero
// coefficients are trimmed; zero is the empty vector.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "zbrng/error.hpp"

namespace zbrng {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline bool is_zero(const Rat& r) { return r.is_zero(); }
inline bool is_integer(const Rat& r) { return boost::multiprecision::denominator(r) == 1; }

inline std::string to_string(const Rat& r) { return r.str(); }

/// Largest cyclotomic order accepted by parsing and construction.
inline constexpr int kMaxCyclotomicOrder = 1024;

namespace detail {

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_mul_overflow(a, b, &out)) throw Error("64-bit overflow in integer arithmetic");
    return out;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_add_overflow(a, b, &out)) throw Error("64-bit overflow in integer arithmetic");
    return out;
}

inline int lcm_order(int a, int b) {
    const long long l = std::lcm<long long>(a, b);
    if (l > kMaxCyclotomicOrder) throw InputError("cyclotomic order " + std::to_string(l) + " out of range");
    return static_cast<int>(l);
}

inline int moebius(int n) {
    int result = 1;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        n /= p;
        if (n % p == 0) return 0;
        result = -result;
    }
    if (n > 1) result = -result;
    return result;
}

using IntPoly = std::vector<std::int64_t>; // ascending degree

inline IntPoly times_binomial(const IntPoly& p, int d) { // p * (x^d - 1)
    IntPoly out(p.size() + d, 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        out[i + d] = checked_add(out[i + d], p[i]);
        out[i] = checked_add(out[i], -p[i]);
    }
    return out;
}

inline IntPoly over_binomial(const IntPoly& p, int d) { // exact p / (x^d - 1)
    const std::size_t deg = p.size() - 1;
    IntPoly quot(deg - d + 1, 0);
    IntPoly rem = p;
    for (std::size_t i = deg + 1; i-- > static_cast<std::size_t>(d);) {
        const std::int64_t c = rem[i];
        quot[i - d] = c;
        rem[i] = 0;
        rem[i - d] = checked_add(rem[i - d], c);
    }
    for (std::int64_t c : rem)
        if (c != 0) throw Error("internal: inexact cyclotomic division");
    return quot;
}

/// Phi_q and the reductions of x^j modulo Phi_q for 0 <= j < q.
struct CyclotomicData {
    int order = 1;
    int degree = 1;
    IntPoly phi;
    std::vector<IntPoly> powers; // powers[j] has length `degree`
};

inline std::shared_ptr<const CyclotomicData> build_cyclotomic(int q) {
    IntPoly num{1};
    std::vector<int> denominators;
    for (int d = 1; d <= q; ++d) {
        if (q % d != 0) continue;
        const int mu = moebius(q / d);
        if (mu == 1) num = times_binomial(num, d);
        else if (mu == -1) denominators.push_back(d);
    }
    for (int d : denominators) num = over_binomial(num, d);

    auto data = std::make_shared<CyclotomicData>();
    data->order = q;
    data->degree = static_cast<int>(num.size()) - 1;
    data->phi = num;
    const int deg = data->degree;
    IntPoly cur(deg, 0);
    cur[0] = 1;
    data->powers.reserve(q);
    for (int j = 0; j < q; ++j) {
        data->powers.push_back(cur);
        // multiply by x and reduce with the monic Phi_q
        IntPoly next(deg, 0);
        const std::int64_t top = cur[deg - 1];
        for (int i = deg - 1; i > 0; --i) next[i] = cur[i - 1];
        for (int i = 0; i < deg; ++i) next[i] = checked_add(next[i], checked_mul(-top, num[i]));
        cur = std::move(next);
    }
    return data;
}

inline const CyclotomicData& cyclotomic_data(int q) {
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const CyclotomicData>> cache;
    if (q < 1 || q > kMaxCyclotomicOrder) throw InputError("cyclotomic order " + std::to_string(q) + " out of range");
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[q];
    if (!slot) slot = build_cyclotomic(q);
    return *slot;
}

inline void trim(std::vector<Rat>& c) {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
}

/// Solve a small dense square system over Q; false when singular.
inline bool solve_small(std::vector<std::vector<Rat>> a, std::vector<Rat> b, std::vector<Rat>& x) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col].is_zero()) ++piv;
        if (piv == n) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        const Rat inv = 1 / a[col][col];
        for (std::size_t j = col; j < n; ++j) a[col][j] *= inv;
        b[col] *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            const Rat f = a[r][col];
            for (std::size_t j = col; j < n; ++j) a[r][j] -= f * a[col][j];
            b[r] -= f * b[col];
        }
    }
    x = std::move(b);
    return true;
}

} // namespace detail

class CycNum {
public:
    CycNum() = default;
    CycNum(const Rat& r) {
        if (!r.is_zero()) coeffs_.push_back(r);
    }
    CycNum(long long v) : CycNum(Rat(v)) {}
    CycNum(int v) : CycNum(Rat(v)) {}

    /// zeta_order^exponent (exponent taken modulo order).
    static CycNum zeta(int order, long long exponent = 1) {
        const auto& data = detail::cyclotomic_data(order);
        long long e = exponent % order;
        if (e < 0) e += order;
        CycNum out;
        out.order_ = order;
        const auto& p = data.powers[static_cast<std::size_t>(e)];
        out.coeffs_.assign(p.begin(), p.end());
        detail::trim(out.coeffs_);
        return out;
    }

    /// Build from coefficients on the full exponent range 0..order-1
    /// (the value sum_j c_j zeta^j); reduces to the canonical basis.
    static CycNum from_exponent_coefficients(int order, const std::vector<Rat>& by_exponent) {
        const auto& data = detail::cyclotomic_data(order);
        if (by_exponent.size() > static_cast<std::size_t>(order))
            throw InputError("too many exponent coefficients for order " + std::to_string(order));
        CycNum out;
        out.order_ = order;
        out.coeffs_.assign(static_cast<std::size_t>(data.degree), Rat(0));
        for (std::size_t j = 0; j < by_exponent.size(); ++j) {
            if (by_exponent[j].is_zero()) continue;
            const auto& p = data.powers[j];
            for (int i = 0; i < data.degree; ++i)
                if (p[i] != 0) out.coeffs_[i] += by_exponent[j] * p[i];
        }
        detail::trim(out.coeffs_);
        return out;
    }

    int order() const noexcept { return order_; }
    /// Power-basis coefficients (length <= phi(order), trailing zeros trimmed).
    const std::vector<Rat>& coefficients() const noexcept { return coeffs_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    bool is_rational() const noexcept { return coeffs_.size() <= 1; }

    Rat to_rational() const {
        if (!is_rational()) throw AlgebraError("cyclotomic value " + str() + " is not rational");
        return coeffs_.empty() ? Rat(0) : coeffs_[0];
    }

    /// The same value viewed inside Q(zeta_target); requires order() | target.
    CycNum in_order(int target) const {
        if (target == order_) return *this;
        if (target % order_ != 0)
            throw InputError("cannot embed order " + std::to_string(order_) + " into " + std::to_string(target));
        const auto& data = detail::cyclotomic_data(target);
        CycNum out;
        out.order_ = target;
        if (coeffs_.empty()) return out;
        const int step = target / order_;
        out.coeffs_.assign(static_cast<std::size_t>(data.degree), Rat(0));
        for (std::size_t j = 0; j < coeffs_.size(); ++j) {
            if (coeffs_[j].is_zero()) continue;
            const auto& p = data.powers[(j * step) % target];
            for (int i = 0; i < data.degree; ++i)
                if (p[i] != 0) out.coeffs_[i] += coeffs_[j] * p[i];
        }
        detail::trim(out.coeffs_);
        return out;
    }

    CycNum conj() const {
        if (is_rational()) return *this;
        const auto& data = detail::cyclotomic_data(order_);
        CycNum out;
        out.order_ = order_;
        out.coeffs_.assign(static_cast<std::size_t>(data.degree), Rat(0));
        for (std::size_t j = 0; j < coeffs_.size(); ++j) {
            if (coeffs_[j].is_zero()) continue;
            const auto& p = data.powers[(order_ - j) % order_];
            for (int i = 0; i < data.degree; ++i)
                if (p[i] != 0) out.coeffs_[i] += coeffs_[j] * p[i];
        }
        detail::trim(out.coeffs_);
        return out;
    }

    CycNum inverse() const {
        if (is_zero()) throw AlgebraError("division by zero in cyclotomic field");
        if (is_rational()) {
            CycNum out(1 / coeffs_[0]);
            out.order_ = order_;
            return out;
        }
        // Solve (multiplication-by-this matrix) * y = 1.
        const int deg = detail::cyclotomic_data(order_).degree;
        std::vector<std::vector<Rat>> m(deg, std::vector<Rat>(deg));
        for (int j = 0; j < deg; ++j) {
            const CycNum col = *this * CycNum::zeta(order_, j);
            for (int i = 0; i < deg && i < static_cast<int>(col.coeffs_.size()); ++i) m[i][j] = col.coeffs_[i];
        }
        std::vector<Rat> rhs(deg, Rat(0));
        rhs[0] = 1;
        std::vector<Rat> y;
        if (!detail::solve_small(std::move(m), std::move(rhs), y)) throw AlgebraError("internal: singular multiplication matrix");
        CycNum out;
        out.order_ = order_;
        out.coeffs_ = std::move(y);
        detail::trim(out.coeffs_);
        return out;
    }

    /// Double-precision value with zeta_q = exp(2 pi i / q).
    std::complex<double> to_complex() const {
        long double re = 0, im = 0;
        const long double two_pi = 2.0L * 3.14159265358979323846264338327950288L;
        for (std::size_t j = 0; j < coeffs_.size(); ++j) {
            if (coeffs_[j].is_zero()) continue;
            const long double c = static_cast<long double>(coeffs_[j]);
            const long double angle = two_pi * static_cast<long double>(j) / order_;
            re += c * std::cos(angle);
            im += c * std::sin(angle);
        }
        return {static_cast<double>(re), static_cast<double>(im)};
    }

    std::string str() const;

    CycNum operator-() const {
        CycNum out = *this;
        for (auto& c : out.coeffs_) c = -c;
        return out;
    }

    friend CycNum operator+(const CycNum& a, const CycNum& b) {
        if (a.order_ != b.order_) {
            const int q = detail::lcm_order(a.order_, b.order_);
            return a.in_order(q) + b.in_order(q);
        }
        CycNum out;
        out.order_ = a.order_;
        out.coeffs_.resize(std::max(a.coeffs_.size(), b.coeffs_.size()));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) out.coeffs_[i] = a.coeffs_[i];
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i) out.coeffs_[i] += b.coeffs_[i];
        detail::trim(out.coeffs_);
        return out;
    }

    friend CycNum operator-(const CycNum& a, const CycNum& b) { return a + (-b); }

    friend CycNum operator*(const CycNum& a, const CycNum& b) {
        if (a.order_ != b.order_) {
            const int q = detail::lcm_order(a.order_, b.order_);
            return a.in_order(q) * b.in_order(q);
        }
        CycNum out;
        out.order_ = a.order_;
        if (a.coeffs_.empty() || b.coeffs_.empty()) return out;
        if (a.coeffs_.size() == 1 && b.coeffs_.size() == 1) {
            out.coeffs_.push_back(a.coeffs_[0] * b.coeffs_[0]);
            return out;
        }
        const auto& data = detail::cyclotomic_data(a.order_);
        std::vector<Rat> prod(a.coeffs_.size() + b.coeffs_.size() - 1, Rat(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
                if (!b.coeffs_[j].is_zero()) prod[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
        const std::size_t deg = static_cast<std::size_t>(data.degree);
        out.coeffs_.assign(deg, Rat(0));
        for (std::size_t e = 0; e < prod.size(); ++e) {
            if (prod[e].is_zero()) continue;
            if (e < deg) {
                out.coeffs_[e] += prod[e];
                continue;
            }
            const auto& p = data.powers[e % static_cast<std::size_t>(a.order_)];
            for (std::size_t i = 0; i < deg; ++i)
                if (p[i] != 0) out.coeffs_[i] += prod[e] * p[i];
        }
        detail::trim(out.coeffs_);
        return out;
    }

    friend CycNum operator/(const CycNum& a, const CycNum& b) { return a * b.inverse(); }

    CycNum& operator+=(const CycNum& b) { return *this = *this + b; }
    CycNum& operator-=(const CycNum& b) { return *this = *this - b; }
    CycNum& operator*=(const CycNum& b) { return *this = *this * b; }
    CycNum& operator/=(const CycNum& b) { return *this = *this / b; }

    friend bool operator==(const CycNum& a, const CycNum& b) {
        if (a.order_ == b.order_) return a.coeffs_ == b.coeffs_;
        if (a.is_rational() && b.is_rational()) return a.coeffs_ == b.coeffs_;
        const int q = detail::lcm_order(a.order_, b.order_);
        return a.in_order(q).coeffs_ == b.in_order(q).coeffs_;
    }

    /// Total order on canonical forms (after embedding into a common order);
    /// used for sorting and de-duplication only.
    friend bool canonical_less(const CycNum& a, const CycNum& b) {
        if (a.order_ != b.order_) {
            const int q = detail::lcm_order(a.order_, b.order_);
            return canonical_less(a.in_order(q), b.in_order(q));
        }
        const std::size_t n = std::max(a.coeffs_.size(), b.coeffs_.size());
        for (std::size_t i = 0; i < n; ++i) {
            const Rat x = i < a.coeffs_.size() ? a.coeffs_[i] : Rat(0);
            const Rat y = i < b.coeffs_.size() ? b.coeffs_[i] : Rat(0);
            if (x != y) return x < y;
        }
        return false;
    }

private:
    int order_ = 1;
    std::vector<Rat> coeffs_;
};

inline bool is_zero(const CycNum& x) { return x.is_zero(); }

enum class CycOp { add, sub, mul };

/// Strict arithmetic: both operands must already share an order.
/// (The overloaded operators embed into the lcm order instead.)
inline CycNum cyc_arith(const CycNum& a, const CycNum& b, CycOp op) {
    if (a.order() != b.order()) throw InputError("order mismatch");
    switch (op) {
        case CycOp::add: return a + b;
        case CycOp::sub: return a - b;
        case CycOp::mul: return a * b;
    }
    return {};
}

inline CycNum cyc_conj(const CycNum& a) { return a.conj(); }
inline std::complex<double> cyc_embed(const CycNum& a) { return a.to_complex(); }

/// Order of the smallest field containing every value (lcm of their orders).
template <class Range>
int common_order(const Range& values) {
    int q = 1;
    for (const CycNum& v : values) q = detail::lcm_order(q, v.order());
    return q;
}

// ---------------------------------------------------------------------------
// Literal grammar (no whitespace inside an entry):
//   entry := term ( ('+'|'-') term )*        leading '-' allowed
//   term  := coeff | coeff '*' root | root
//   coeff := int | int '/' posint
//   root  := 'z' posint [ '^' int ]

inline std::string format_cyc(const CycNum& a) {
    const auto& c = a.coefficients();
    std::string out;
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j].is_zero()) continue;
        const bool negative = c[j] < 0;
        const Rat mag = negative ? Rat(-c[j]) : c[j];
        std::string term;
        if (j == 0) {
            term = mag.str();
        } else {
            if (mag != 1) term = mag.str() + "*";
            term += "z" + std::to_string(a.order());
            if (j != 1) term += "^" + std::to_string(j);
        }
        if (negative) out += "-";
        else if (!out.empty()) out += "+";
        out += term;
    }
    return out.empty() ? "0" : out;
}

inline std::string CycNum::str() const { return format_cyc(*this); }

inline std::ostream& operator<<(std::ostream& os, const CycNum& a) { return os << format_cyc(a); }

namespace detail {

class LiteralParser {
public:
    explicit LiteralParser(std::string_view text) : text_(text) {}

    CycNum parse() {
        if (text_.empty()) throw ParseError("empty cyclotomic literal", 0);
        std::vector<Term> terms;
        bool negative = false;
        if (peek() == '-') {
            negative = true;
            ++pos_;
        }
        for (;;) {
            Term t = term();
            if (negative) t.coeff = -t.coeff;
            terms.push_back(std::move(t));
            if (pos_ == text_.size()) break;
            const char c = text_[pos_];
            if (c != '+' && c != '-') throw ParseError(std::string("unexpected character '") + c + "'", pos_);
            negative = c == '-';
            ++pos_;
        }
        int q = 1;
        for (const auto& t : terms) q = lcm_order(q, t.order);
        std::vector<Rat> by_exponent(static_cast<std::size_t>(q), Rat(0));
        for (const auto& t : terms) {
            const long long step = q / t.order;
            long long e = (t.exponent % t.order) * step % q;
            if (e < 0) e += q;
            by_exponent[static_cast<std::size_t>(e)] += t.coeff;
        }
        return CycNum::from_exponent_coefficients(q, by_exponent);
    }

private:
    struct Term {
        Rat coeff;
        int order;
        long long exponent;
    };

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    bool is_digit() const { return pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9'; }

    BigInt digits(const char* what) {
        if (!is_digit()) throw ParseError(std::string("expected ") + what, pos_);
        const std::size_t start = pos_;
        while (is_digit()) ++pos_;
        return BigInt(std::string(text_.substr(start, pos_ - start)));
    }

    Term term() {
        Term t{Rat(1), 1, 0};
        if (peek() != 'z') {
            const BigInt num = digits("digit or 'z'");
            BigInt den = 1;
            if (peek() == '/') {
                ++pos_;
                const std::size_t at = pos_;
                den = digits("denominator");
                if (den == 0) throw ParseError("zero denominator", at);
            }
            t.coeff = Rat(num, den);
            if (peek() != '*') return t;
            ++pos_;
            if (peek() != 'z') throw ParseError("expected 'z' after '*'", pos_);
        }
        ++pos_; // 'z'
        const std::size_t order_at = pos_;
        const BigInt order = digits("root order");
        if (order < 1 || order > kMaxCyclotomicOrder) throw ParseError("root order out of range", order_at);
        t.order = static_cast<int>(order);
        t.exponent = 1;
        if (peek() == '^') {
            ++pos_;
            const std::size_t exp_at = pos_;
            bool neg = false;
            if (peek() == '-') {
                neg = true;
                ++pos_;
            }
            const BigInt e = digits("exponent");
            if (e > BigInt(1) << 62) throw ParseError("exponent out of range", exp_at);
            t.exponent = static_cast<long long>(e);
            if (neg) t.exponent = -t.exponent;
        }
        return t;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline CycNum parse_cyc(std::string_view text) { return detail::LiteralParser(text).parse(); }

} // namespace zbrng
