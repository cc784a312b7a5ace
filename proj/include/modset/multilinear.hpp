#ifndef MODSET_MULTILINEAR_HPP
#define MODSET_MULTILINEAR_HPP

#include <modset/int_poly.hpp>
#include <modset/modular.hpp>

#include <bit>
#include <cstdint>
#include <map>
#include <sstream>
#include <vector>

namespace modset {

/// Multilinear polynomial in n variables over F_p, stored sparsely as a map
/// from variable subsets (bitmask over [n], bit j-1 = variable x_j) to
/// nonzero coefficients in [1, p-1]. The empty subset is the constant term.
struct MLPoly {
    int n = 0;
    long long p = 2;
    std::map<std::uint64_t, long long> terms;

    bool is_zero() const { return terms.empty(); }
};

/// Multilinear polynomial with integer coefficients: the expression algebra
/// on which multilinearization operates. Products collapse x_S * x_T to
/// x_{S union T}, which agrees with the plain product on every 0/1 point, so
/// any sum/product expression built here evaluates on the cube exactly like
/// the original (non-multilinear) polynomial it was assembled from.
struct MLPolyZ {
    int n = 0;
    std::map<std::uint64_t, BigInt> terms;

    static MLPolyZ constant(int n, const BigInt& c)
    {
        MLPolyZ f;
        f.n = n;
        if (c != 0)
            f.terms[0] = c;
        return f;
    }

    /// x_j for 1-based variable index j.
    static MLPolyZ variable(int n, int j)
    {
        if (j < 1 || j > n)
            throw std::invalid_argument("MLPolyZ::variable: index out of range");
        MLPolyZ f;
        f.n = n;
        f.terms[1ULL << (j - 1)] = 1;
        return f;
    }

    static MLPolyZ monomial(int n, std::uint64_t subset, const BigInt& c = 1)
    {
        MLPolyZ f;
        f.n = n;
        if (c != 0)
            f.terms[subset] = c;
        return f;
    }

    void add_term(std::uint64_t subset, const BigInt& c)
    {
        auto it = terms.find(subset);
        if (it == terms.end()) {
            if (c != 0)
                terms[subset] = c;
        } else {
            it->second += c;
            if (it->second == 0)
                terms.erase(it);
        }
    }

    friend MLPolyZ operator+(const MLPolyZ& a, const MLPolyZ& b)
    {
        MLPolyZ r = a;
        for (const auto& [s, c] : b.terms)
            r.add_term(s, c);
        return r;
    }

    friend MLPolyZ operator-(const MLPolyZ& a, const MLPolyZ& b)
    {
        MLPolyZ r = a;
        for (const auto& [s, c] : b.terms)
            r.add_term(s, -c);
        return r;
    }

    friend MLPolyZ operator*(const MLPolyZ& a, const MLPolyZ& b)
    {
        MLPolyZ r;
        r.n = a.n;
        for (const auto& [s, c] : a.terms)
            for (const auto& [t, d] : b.terms)
                r.add_term(s | t, c * d);
        return r;
    }

    friend MLPolyZ operator*(const BigInt& c, const MLPolyZ& a)
    {
        MLPolyZ r;
        r.n = a.n;
        if (c != 0)
            for (const auto& [s, d] : a.terms)
                r.terms[s] = c * d;
        return r;
    }
};

/// Reduce an integer-coefficient multilinear polynomial mod p. Combined with
/// the collapsing product above this computes the multilinearization of any
/// integer sum/product expression, reduced to F_p.
inline MLPoly multilinearize(const MLPolyZ& g, long long p)
{
    if (!is_prime(p))
        throw std::invalid_argument("multilinearize: p must be prime");
    MLPoly f;
    f.n = g.n;
    f.p = p;
    for (const auto& [s, c] : g.terms) {
        long long r = static_cast<long long>(c % p);
        if (r < 0)
            r += p;
        if (r != 0)
            f.terms[s] = r;
    }
    return f;
}

inline long long ml_eval(const MLPoly& f, std::uint64_t v_mask)
{
    long long acc = 0;
    for (const auto& [s, c] : f.terms)
        if ((s & v_mask) == s)
            acc = (acc + c) % f.p;
    return acc;
}

inline long long ml_eval(const MLPoly& f, const std::vector<int>& v)
{
    if (static_cast<int>(v.size()) != f.n)
        throw std::invalid_argument("ml_eval: vector length must equal n");
    std::uint64_t mask = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[j] != 0 && v[j] != 1)
            throw std::invalid_argument("ml_eval: vector entries must be 0 or 1");
        if (v[j])
            mask |= 1ULL << j;
    }
    return ml_eval(f, mask);
}

/// Max subset size over stored terms; 0 for the zero polynomial.
inline long long ml_degree(const MLPoly& f)
{
    long long d = 0;
    for (const auto& [s, c] : f.terms)
        d = std::max<long long>(d, std::popcount(s));
    return d;
}

namespace detail {

template <typename Fn>
inline void for_each_subset_of_size(const std::vector<int>& elems, long long size, Fn&& fn)
{
    long long m = static_cast<long long>(elems.size());
    if (size > m)
        return;
    std::vector<long long> pick(static_cast<std::size_t>(size));
    for (long long i = 0; i < size; ++i)
        pick[static_cast<std::size_t>(i)] = i;
    while (true) {
        std::uint64_t mask = 0;
        for (long long i : pick)
            mask |= 1ULL << elems[static_cast<std::size_t>(i)];
        fn(mask);
        long long pos = size - 1;
        while (pos >= 0 && pick[static_cast<std::size_t>(pos)] == m - size + pos)
            --pos;
        if (pos < 0)
            break;
        ++pick[static_cast<std::size_t>(pos)];
        for (long long i = pos + 1; i < size; ++i)
            pick[static_cast<std::size_t>(i)] = pick[static_cast<std::size_t>(i - 1)] + 1;
    }
}

} // namespace detail

/// Multilinear representative of h(sum_{j in Y} x_j) over F_p: on the cube,
/// C(sum_{j in Y} x_j, j) equals the elementary symmetric sum of the x_S with
/// S a j-subset of Y, so the result is sum_j c_j e_j(Y) with c_j mod p. This
/// avoids expanding the composition generically.
inline MLPoly compose_inner(const IntPoly& h, std::uint64_t y_mask, int n, long long p)
{
    if (!is_prime(p))
        throw std::invalid_argument("compose_inner: p must be prime");
    if (n < 0 || n > 63)
        throw std::invalid_argument("compose_inner: n out of range [0, 63]");
    if (n < 64 && (y_mask & ~((n == 0 ? 0ULL : (~0ULL >> (64 - n))))) != 0)
        throw std::invalid_argument("compose_inner: Y must be a subset of [n]");

    std::vector<int> elems;
    for (int j = 0; j < n; ++j)
        if (y_mask >> j & 1)
            elems.push_back(j);

    MLPoly f;
    f.n = n;
    f.p = p;
    long long dmax = std::min<long long>(h.degree(), static_cast<long long>(elems.size()));
    for (long long j = 0; j <= dmax; ++j) {
        long long cj = static_cast<long long>(h.coeffs[static_cast<std::size_t>(j)] % p);
        if (cj < 0)
            cj += p;
        if (cj == 0)
            continue;
        detail::for_each_subset_of_size(elems, j, [&](std::uint64_t s) { f.terms[s] = cj; });
    }
    return f;
}

inline MLPoly compose_inner(const IntPoly& h, const std::vector<int>& Y, int n, long long p)
{
    std::uint64_t mask = 0;
    for (int j : Y) {
        if (j < 1 || j > n)
            throw std::invalid_argument("compose_inner: Y element out of range [1, n]");
        mask |= 1ULL << (j - 1);
    }
    return compose_inner(h, mask, n, p);
}

namespace detail {

/// Order subsets by (size, lexicographic element sequence).
inline bool subset_lex_less(std::uint64_t a, std::uint64_t b)
{
    int ca = std::popcount(a), cb = std::popcount(b);
    if (ca != cb)
        return ca < cb;
    while (a && b) {
        int ea = std::countr_zero(a), eb = std::countr_zero(b);
        if (ea != eb)
            return ea < eb;
        a &= a - 1;
        b &= b - 1;
    }
    return false;
}

} // namespace detail

/// The auxiliary family h_I: multilinearizations mod p of
///   k_I(x) = x_I * prod_{l=1}^{t} (x_1 + ... + x_n - (q - l)),
/// one for each I with |I| <= q-1-t, ordered by (|I|, lexicographic I).
/// Every h_I vanishes at each 0/1 point whose coordinate sum is congruent to
/// q - l (mod q) for some l in [1, t].
inline std::vector<std::pair<std::uint64_t, MLPoly>> blokhuis_family(int n, const PrimePower& pp,
                                                                     long long t)
{
    if (t < 1 || t > pp.q - 1)
        throw std::invalid_argument("blokhuis_family: requires 1 <= t <= q-1");
    if (n < 0 || n > 63)
        throw std::invalid_argument("blokhuis_family: n out of range [0, 63]");

    MLPolyZ prod = MLPolyZ::constant(n, 1);
    MLPolyZ sigma = MLPolyZ::constant(n, 0);
    for (int j = 1; j <= n; ++j)
        sigma = sigma + MLPolyZ::variable(n, j);
    for (long long l = 1; l <= t; ++l)
        prod = prod * (sigma - MLPolyZ::constant(n, pp.q - l));

    long long max_size = pp.q - 1 - t;
    std::vector<int> ground(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        ground[static_cast<std::size_t>(j)] = j;
    std::vector<std::uint64_t> subsets;
    for (long long sz = 0; sz <= std::min<long long>(max_size, n); ++sz)
        detail::for_each_subset_of_size(ground, sz, [&](std::uint64_t s) { subsets.push_back(s); });
    std::sort(subsets.begin(), subsets.end(), detail::subset_lex_less);

    std::vector<std::pair<std::uint64_t, MLPoly>> family;
    family.reserve(subsets.size());
    for (std::uint64_t s : subsets) {
        MLPolyZ k_I;
        k_I.n = n;
        for (const auto& [m, c] : prod.terms)
            k_I.add_term(m | s, c);
        family.emplace_back(s, multilinearize(k_I, pp.p));
    }
    return family;
}

/// Canonical rendering: monomials by descending degree, ascending bitmask
/// within a degree, coefficients in [0, p-1].
inline std::string render_mlpoly(const MLPoly& f)
{
    if (f.terms.empty())
        return "0";
    std::vector<std::pair<std::uint64_t, long long>> ts(f.terms.begin(), f.terms.end());
    std::sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
        int ca = std::popcount(a.first), cb = std::popcount(b.first);
        if (ca != cb)
            return ca > cb;
        return a.first < b.first;
    });
    std::ostringstream out;
    bool first = true;
    for (const auto& [s, c] : ts) {
        if (!first)
            out << " + ";
        first = false;
        if (s == 0) {
            out << c;
            continue;
        }
        if (c != 1)
            out << c << "*";
        bool firstv = true;
        for (int j = 0; j < 64; ++j)
            if (s >> j & 1) {
                if (!firstv)
                    out << "*";
                out << "x" << (j + 1);
                firstv = false;
            }
    }
    return out.str();
}

} // namespace modset

#endif
