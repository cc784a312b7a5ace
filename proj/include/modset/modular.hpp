#ifndef MODSET_MODULAR_HPP
#define MODSET_MODULAR_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace modset {

using BigInt = boost::multiprecision::cpp_int;

/// Euclidean remainder: result always in [0, m).
inline long long mod_euclid(long long r, long long m)
{
    if (m <= 0)
        throw std::invalid_argument("mod_euclid: modulus must be positive");
    long long v = r % m;
    return v < 0 ? v + m : v;
}

inline long long mod_euclid(const BigInt& r, long long m)
{
    if (m <= 0)
        throw std::invalid_argument("mod_euclid: modulus must be positive");
    BigInt v = r % m;
    if (v < 0)
        v += m;
    return v.convert_to<long long>();
}

inline bool is_prime(long long p)
{
    if (p < 2)
        return false;
    for (long long d = 2; d * d <= p; ++d)
        if (p % d == 0)
            return false;
    return true;
}

/// A prime power q = p^alpha. Validated at construction.
struct PrimePower {
    long long p;
    long long alpha;
    long long q;

    PrimePower(long long p_, long long alpha_) : p(p_), alpha(alpha_), q(1)
    {
        if (!is_prime(p))
            throw std::invalid_argument("PrimePower: p = " + std::to_string(p) + " is not prime");
        if (alpha < 1)
            throw std::invalid_argument("PrimePower: alpha must be >= 1");
        for (long long i = 0; i < alpha; ++i) {
            if (q > (1LL << 62) / p)
                throw std::invalid_argument("PrimePower: p^alpha overflows");
            q *= p;
        }
    }

    /// Factor q as p^alpha; rejects q with two or more distinct prime divisors.
    static PrimePower from_q(long long q)
    {
        if (q < 2)
            throw std::invalid_argument("PrimePower: q must be >= 2");
        long long p = 0;
        for (long long d = 2; d * d <= q; ++d) {
            if (q % d == 0) {
                p = d;
                break;
            }
        }
        if (p == 0)
            return PrimePower(q, 1); // q itself prime
        long long rest = q, alpha = 0;
        while (rest % p == 0) {
            rest /= p;
            ++alpha;
        }
        if (rest != 1)
            throw std::invalid_argument("q = " + std::to_string(q) +
                                        " is not a prime power (modulus must be p^alpha)");
        return PrimePower(p, alpha);
    }
};

/// A p-adic valuation: a nonnegative integer, or INFINITE for the valuation of 0.
/// INFINITE compares strictly greater than every finite value.
class Valuation {
public:
    static Valuation infinite() { return Valuation(0, true); }
    static Valuation finite(long long v)
    {
        if (v < 0)
            throw std::invalid_argument("Valuation: finite value must be >= 0");
        return Valuation(v, false);
    }

    bool is_infinite() const { return inf_; }
    long long value() const
    {
        if (inf_)
            throw std::logic_error("Valuation: value() on INFINITE");
        return v_;
    }

    friend bool operator==(const Valuation& a, const Valuation& b)
    {
        return a.inf_ == b.inf_ && (a.inf_ || a.v_ == b.v_);
    }
    friend bool operator!=(const Valuation& a, const Valuation& b) { return !(a == b); }
    friend bool operator<(const Valuation& a, const Valuation& b)
    {
        if (a.inf_)
            return false;
        if (b.inf_)
            return true;
        return a.v_ < b.v_;
    }
    friend bool operator>(const Valuation& a, const Valuation& b) { return b < a; }
    friend bool operator<=(const Valuation& a, const Valuation& b) { return !(b < a); }
    friend bool operator>=(const Valuation& a, const Valuation& b) { return !(a < b); }

    std::string str() const { return inf_ ? "inf" : std::to_string(v_); }

private:
    Valuation(long long v, bool inf) : v_(v), inf_(inf) {}
    long long v_;
    bool inf_;
};

inline Valuation operator+(const Valuation& a, const Valuation& b)
{
    if (a.is_infinite() || b.is_infinite())
        return Valuation::infinite();
    return Valuation::finite(a.value() + b.value());
}

/// val_p(t): largest j with p^j | t; INFINITE for t = 0.
inline Valuation val_p(const BigInt& t, long long p)
{
    if (!is_prime(p))
        throw std::invalid_argument("val_p: p = " + std::to_string(p) + " is not prime");
    if (t == 0)
        return Valuation::infinite();
    BigInt u = abs(t);
    long long j = 0;
    while (u % p == 0) {
        u /= p;
        ++j;
    }
    return Valuation::finite(j);
}

inline Valuation val_p(long long t, long long p) { return val_p(BigInt(t), p); }

/// Generalized binomial coefficient C(r, j) = r(r-1)...(r-j+1) / j! for any
/// integer r (negative allowed), exact; 0 when j < 0. The running product
/// stays integral: after step i it equals C(r, i+1).
inline BigInt binom_int(long long r, long long j)
{
    if (j < 0)
        return 0;
    BigInt acc = 1;
    for (long long i = 0; i < j; ++i) {
        acc *= BigInt(r) - i;
        acc /= i + 1;
    }
    return acc;
}

/// Instance check of the divisibility criterion:
///   p | C(r-1, q-1)  <=>  q does not divide r.
/// Expected to hold for every integer r and every prime power.
inline bool check_binomka(long long r, const PrimePower& pp)
{
    bool p_divides = binom_int(r - 1, pp.q - 1) % pp.p == 0;
    bool q_divides_r = mod_euclid(r, pp.q) == 0;
    return p_divides == !q_divides_r;
}

/// Instance check of the period-q congruence C(x+q, j) = C(x, j) (mod p),
/// valid for 0 <= j < q.
inline bool check_binom_period(long long x, long long j, const PrimePower& pp)
{
    if (j < 0 || j >= pp.q)
        throw std::invalid_argument("check_binom_period: requires 0 <= j < q");
    BigInt diff = binom_int(x + pp.q, j) - binom_int(x, j);
    return diff % pp.p == 0;
}

} // namespace modset

#endif
