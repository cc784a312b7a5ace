#ifndef MODSET_INT_POLY_HPP
#define MODSET_INT_POLY_HPP

#include <modset/modular.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <vector>

namespace modset {

/// Integer-valued univariate polynomial in the binomial basis:
///   h(x) = sum_j coeffs[j] * C(x, j).
/// Every polynomial taking integer values on the integers has a unique such
/// expansion with integer coefficients, so integrality is structural here.
struct IntPoly {
    std::vector<BigInt> coeffs;

    IntPoly() = default;
    explicit IntPoly(std::vector<BigInt> c) : coeffs(std::move(c)) { normalize(); }
    IntPoly(std::initializer_list<long long> c)
    {
        for (long long v : c)
            coeffs.emplace_back(v);
        normalize();
    }

    /// Drop trailing zero coefficients (canonical degree).
    void normalize()
    {
        while (!coeffs.empty() && coeffs.back() == 0)
            coeffs.pop_back();
    }

    bool is_zero() const { return coeffs.empty(); }

    /// Degree in the binomial basis; -1 for the zero polynomial.
    long long degree() const { return static_cast<long long>(coeffs.size()) - 1; }

    friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.coeffs == b.coeffs; }
};

inline BigInt eval_intpoly(const IntPoly& h, long long t)
{
    BigInt acc = 0;
    for (std::size_t j = 0; j < h.coeffs.size(); ++j)
        if (h.coeffs[j] != 0)
            acc += h.coeffs[j] * binom_int(t, static_cast<long long>(j));
    return acc;
}

inline IntPoly add(const IntPoly& a, const IntPoly& b)
{
    std::vector<BigInt> c(std::max(a.coeffs.size(), b.coeffs.size()), 0);
    for (std::size_t j = 0; j < a.coeffs.size(); ++j)
        c[j] += a.coeffs[j];
    for (std::size_t j = 0; j < b.coeffs.size(); ++j)
        c[j] += b.coeffs[j];
    return IntPoly(std::move(c));
}

/// The residue indicator L_a(x) = (-1)^(q-1) C(x-a-1, q-1), expanded in the
/// binomial basis via the Vandermonde identity:
///   C(x + (-a-1), q-1) = sum_j C(x, j) C(-a-1, q-1-j).
/// Satisfies L_a(a) = 1 (mod p) and L_a(b) = 0 (mod p) for the other
/// residues b in {0, ..., q-1}.
inline IntPoly build_La(long long a, const PrimePower& pp)
{
    if (a < 0 || a >= pp.q)
        throw std::invalid_argument("build_La: residue a must lie in [0, q-1]");
    long long sign = (pp.q - 1) % 2 == 0 ? 1 : -1;
    std::vector<BigInt> c(static_cast<std::size_t>(pp.q));
    for (long long j = 0; j < pp.q; ++j)
        c[static_cast<std::size_t>(j)] = sign * binom_int(-a - 1, pp.q - 1 - j);
    return IntPoly(std::move(c));
}

/// The separating polynomial F_L(x) = sum over a in {0..q-1} \ L of L_a(x).
/// Takes integer values everywhere, has degree <= q-1, and reduces mod p to
/// the indicator of "x mod q not in L".
inline IntPoly build_FL(const std::vector<int>& L, const PrimePower& pp)
{
    std::uint64_t l_mask = 0;
    for (int r : L) {
        if (r < 0 || r >= pp.q)
            throw std::invalid_argument("build_FL: residue out of range [0, q-1]");
        l_mask |= 1ULL << r;
    }
    if (L.empty())
        throw std::invalid_argument("build_FL: L must be nonempty");
    if (l_mask == (pp.q >= 64 ? ~0ULL : (1ULL << pp.q) - 1))
        throw std::invalid_argument("build_FL: L must be a proper subset of {0..q-1}");

    IntPoly f;
    for (long long a = 0; a < pp.q; ++a)
        if (!(l_mask >> a & 1))
            f = add(f, build_La(a, pp));
    return f;
}

/// Verdict of a valuation-separation check over a finite window.
/// `separated` restates the definition on the sampled points; `exact` is set
/// only when the depth-1 residue pattern certifies the verdict for all
/// integers via period-q congruence of binomials (possible only for
/// deg <= q-1).
struct SeparationReport {
    Valuation max_val_outside = Valuation::infinite();
    Valuation min_val_inside = Valuation::infinite();
    bool separated = false;
    bool exact = false;
};

inline long long default_window(const PrimePower& pp) { return 4 * pp.q * pp.q; }

namespace detail {

inline std::uint64_t residue_mask(const std::vector<int>& rs, long long q, const char* who)
{
    std::uint64_t m = 0;
    for (int r : rs) {
        if (r < 0 || r >= q)
            throw std::invalid_argument(std::string(who) + ": residue out of range [0, q-1]");
        m |= 1ULL << r;
    }
    return m;
}

/// Early-exit separation test used by the enumeration search: true iff
/// max val over A-classes < min val over L-classes within the window.
inline bool separates_in_window(const IntPoly& h, std::uint64_t a_mask, std::uint64_t l_mask,
                                const PrimePower& pp, long long window)
{
    Valuation max_out = Valuation::finite(0);
    Valuation min_in = Valuation::infinite();
    bool seen_out = false, seen_in = false;
    for (long long s = -window; s <= window; ++s) {
        long long r = mod_euclid(s, pp.q);
        bool in_a = a_mask >> r & 1, in_l = l_mask >> r & 1;
        if (!in_a && !in_l)
            continue;
        Valuation v = val_p(eval_intpoly(h, s), pp.p);
        if (in_a) {
            if (!seen_out || max_out < v) {
                max_out = v;
                seen_out = true;
            }
        } else {
            if (v < min_in) {
                min_in = v;
                seen_in = true;
            }
        }
        if (seen_out && seen_in && !(max_out < min_in))
            return false;
    }
    return seen_out && seen_in && max_out < min_in;
}

} // namespace detail

/// Checks whether h separates the residue classes A + qZ from L + qZ, by
/// p-adic valuation, over the sample window {-window, ..., window}.
inline SeparationReport verify_separator(const IntPoly& h, const std::vector<int>& A,
                                         const std::vector<int>& L, const PrimePower& pp,
                                         long long window = 0)
{
    if (window == 0)
        window = default_window(pp);
    std::uint64_t a_mask = detail::residue_mask(A, pp.q, "verify_separator");
    std::uint64_t l_mask = detail::residue_mask(L, pp.q, "verify_separator");
    if (a_mask & l_mask)
        throw std::invalid_argument("verify_separator: A and L must be disjoint");
    if (A.empty() || L.empty())
        throw std::invalid_argument("verify_separator: A and L must be nonempty");
    if (window < pp.q)
        throw std::invalid_argument("verify_separator: window must be >= q");

    SeparationReport rep;
    bool seen_out = false;
    for (long long s = -window; s <= window; ++s) {
        long long r = mod_euclid(s, pp.q);
        bool in_a = a_mask >> r & 1, in_l = l_mask >> r & 1;
        if (!in_a && !in_l)
            continue;
        Valuation v = val_p(eval_intpoly(h, s), pp.p);
        if (in_a) {
            if (!seen_out || rep.max_val_outside < v) {
                rep.max_val_outside = v;
                seen_out = true;
            }
        } else if (v < rep.min_val_inside) {
            rep.min_val_inside = v;
        }
    }
    rep.separated = rep.max_val_outside < rep.min_val_inside;

    // Depth-1 certificate: if deg(h) <= q-1 then h mod p has period q, so a
    // pattern of h(r) != 0 (mod p) on A and h(r) = 0 (mod p) on L over one
    // period pins val = 0 outside and val >= 1 inside for ALL integers.
    if (h.degree() <= pp.q - 1 && !h.is_zero()) {
        bool pattern = true;
        for (long long r = 0; r < pp.q && pattern; ++r) {
            if (!((a_mask | l_mask) >> r & 1))
                continue;
            bool zero_mod_p = eval_intpoly(h, r) % pp.p == 0;
            pattern = (a_mask >> r & 1) ? !zero_mod_p : zero_mod_p;
        }
        rep.exact = pattern;
    }
    return rep;
}

inline SeparationReport verify_separator(const IntPoly& h, int nu, const std::vector<int>& L,
                                         const PrimePower& pp, long long window = 0)
{
    return verify_separator(h, std::vector<int>{nu}, L, pp, window);
}

/// Result of the bounded minimal-degree separator search, with the degree
/// bound D = min(floor((1+(s-1)/alpha)^alpha), 2^(s-1)) reported alongside
/// for comparison (s = |L|).
struct SeparatorSearchResult {
    IntPoly poly;
    long long degree = 0;
    BigInt degree_cap_D;
    SeparationReport report;
};

/// Exact integer computation of D = min(floor((1+(s-1)/alpha)^alpha), 2^(s-1)).
inline BigInt separator_degree_cap(long long s, long long alpha)
{
    if (s < 1 || alpha < 1)
        throw std::invalid_argument("separator_degree_cap: requires s >= 1 and alpha >= 1");
    BigInt num = 1, den = 1;
    for (long long i = 0; i < alpha; ++i) {
        num *= alpha + s - 1;
        den *= alpha;
    }
    BigInt first = num / den; // floor, both positive
    BigInt second = BigInt(1) << static_cast<unsigned>(s - 1);
    return std::min(first, second);
}

/// Enumerates binomial-basis polynomials of degree <= d_max with coefficients
/// in [-coeff_bound, coeff_bound], lowest degree first, and returns the first
/// one separating nu + qZ from L + qZ on the default window. Enumeration
/// order within a degree: coefficient tuples (c_0, ..., c_d) lexicographic in
/// the value order 0, 1, -1, 2, -2, ..., last coordinate fastest, with
/// c_d != 0. Deterministic, so repeated runs return the same polynomial.
inline std::optional<SeparatorSearchResult>
search_min_separator(int nu, const std::vector<int>& L, const PrimePower& pp, long long d_max,
                     long long coeff_bound)
{
    std::uint64_t l_mask = detail::residue_mask(L, pp.q, "search_min_separator");
    if (nu < 0 || nu >= pp.q)
        throw std::invalid_argument("search_min_separator: nu out of range [0, q-1]");
    if (l_mask >> nu & 1)
        throw std::invalid_argument("search_min_separator: nu must not lie in L");
    if (L.empty())
        throw std::invalid_argument("search_min_separator: L must be nonempty");
    if (d_max < 0 || coeff_bound < 1)
        throw std::invalid_argument("search_min_separator: requires d_max >= 0, coeff_bound >= 1");

    // value order 0, 1, -1, 2, -2, ...; the leading coefficient skips 0
    std::vector<long long> seq{0};
    for (long long v = 1; v <= coeff_bound; ++v) {
        seq.push_back(v);
        seq.push_back(-v);
    }
    std::uint64_t a_mask = 1ULL << nu;
    long long window = default_window(pp);

    for (long long d = 0; d <= d_max; ++d) {
        std::size_t len = static_cast<std::size_t>(d) + 1;
        std::vector<std::size_t> idx(len, 0);
        idx[len - 1] = 1; // leading coefficient nonzero
        while (true) {
            std::vector<BigInt> c(len);
            for (std::size_t j = 0; j < len; ++j)
                c[j] = seq[idx[j]];
            IntPoly h(std::move(c));
            if (detail::separates_in_window(h, a_mask, l_mask, pp, window)) {
                SeparatorSearchResult res;
                res.degree = h.degree();
                res.poly = std::move(h);
                res.degree_cap_D = separator_degree_cap(static_cast<long long>(L.size()), pp.alpha);
                res.report = verify_separator(res.poly, nu, L, pp, window);
                return res;
            }
            // odometer: last coordinate fastest
            std::size_t pos = len;
            while (pos > 0) {
                --pos;
                std::size_t first = (pos == len - 1) ? 1 : 0;
                if (++idx[pos] < seq.size()) {
                    break;
                }
                idx[pos] = first;
                if (pos == 0) {
                    pos = len; // wrapped all the way: degree exhausted
                    break;
                }
            }
            if (pos == len)
                break;
        }
    }
    return std::nullopt;
}

/// Render as e.g. "2 - C(x,1) + 3*C(x,2)".
inline std::string render_intpoly(const IntPoly& h)
{
    if (h.is_zero())
        return "0";
    std::ostringstream out;
    bool first = true;
    for (std::size_t j = 0; j < h.coeffs.size(); ++j) {
        const BigInt& c = h.coeffs[j];
        if (c == 0)
            continue;
        BigInt a = abs(c);
        if (first) {
            if (c < 0)
                out << "-";
            first = false;
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        if (j == 0)
            out << a.str();
        else if (a == 1)
            out << "C(x," << j << ")";
        else
            out << a.str() << "*C(x," << j << ")";
    }
    return out.str();
}

} // namespace modset

#endif
