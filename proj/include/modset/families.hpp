#ifndef MODSET_FAMILIES_HPP
#define MODSET_FAMILIES_HPP

#include <modset/modular.hpp>

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace modset {

/// A ground-set size n plus an ordered list of distinct subsets of [n], each
/// stored as a bitmask (bit j-1 = element j). Order is preserved: the greedy
/// pairing procedure is deterministic in it.
struct SetSystem {
    int n = 0;
    std::vector<std::uint64_t> sets;

    SetSystem() = default;

    SetSystem(int n_, std::vector<std::uint64_t> masks) : n(n_), sets(std::move(masks))
    {
        validate();
    }

    /// From 1-based element lists.
    SetSystem(int n_, const std::vector<std::vector<int>>& lists) : n(n_)
    {
        sets.reserve(lists.size());
        for (const auto& lst : lists) {
            std::uint64_t m = 0;
            for (int e : lst) {
                if (e < 1 || e > n)
                    throw std::invalid_argument("SetSystem: element " + std::to_string(e) +
                                                " outside [1, " + std::to_string(n) + "]");
                if (m >> (e - 1) & 1)
                    throw std::invalid_argument("SetSystem: repeated element " + std::to_string(e) +
                                                " within a set");
                m |= 1ULL << (e - 1);
            }
            sets.push_back(m);
        }
        validate();
    }

    std::size_t size() const { return sets.size(); }

    std::vector<int> elements(std::size_t i) const
    {
        std::vector<int> out;
        for (int j = 0; j < n; ++j)
            if (sets[i] >> j & 1)
                out.push_back(j + 1);
        return out;
    }

private:
    void validate() const
    {
        if (n < 0 || n > 63)
            throw std::invalid_argument("SetSystem: n must lie in [0, 63]");
        std::uint64_t universe = n == 0 ? 0ULL : ~0ULL >> (64 - n);
        for (std::size_t i = 0; i < sets.size(); ++i) {
            if (sets[i] & ~universe)
                throw std::invalid_argument("SetSystem: set #" + std::to_string(i + 1) +
                                            " leaves the ground set");
            for (std::size_t j = 0; j < i; ++j)
                if (sets[i] == sets[j])
                    throw std::invalid_argument("SetSystem: duplicate set (#" + std::to_string(j + 1) +
                                                " and #" + std::to_string(i + 1) + ")");
        }
    }
};

inline std::string render_set(std::uint64_t mask)
{
    std::ostringstream out;
    out << "{";
    bool first = true;
    for (int j = 0; j < 64; ++j)
        if (mask >> j & 1) {
            if (!first)
                out << ",";
            out << (j + 1);
            first = false;
        }
    out << "}";
    return out.str();
}

/// The modulus data every predicate and bound depends on: q = p^alpha, the
/// residue set L (a proper subset of {0..q-1}), the intersection arity k, and
/// the optional size-residue window width t.
struct ModContext {
    PrimePower pp;
    std::vector<int> L; // sorted, distinct
    long long k = 2;
    std::optional<long long> t;

    ModContext(PrimePower pp_, std::vector<int> L_, long long k_ = 2,
               std::optional<long long> t_ = std::nullopt)
        : pp(pp_), L(std::move(L_)), k(k_), t(t_)
    {
        std::sort(L.begin(), L.end());
        for (std::size_t i = 0; i < L.size(); ++i) {
            if (L[i] < 0 || L[i] >= pp.q)
                throw std::invalid_argument("ModContext: residue " + std::to_string(L[i]) +
                                            " outside [0, q-1]");
            if (i > 0 && L[i] == L[i - 1])
                throw std::invalid_argument("ModContext: repeated residue in L");
        }
        if (static_cast<long long>(L.size()) >= pp.q)
            throw std::invalid_argument("ModContext: L must be a proper subset of {0..q-1}");
        if (k < 2)
            throw std::invalid_argument("ModContext: k must be >= 2");
        if (t && (*t < 1 || *t > pp.q - 1))
            throw std::invalid_argument("ModContext: t must lie in [1, q-1]");
        l_mask_ = 0;
        for (int r : L)
            l_mask_ |= 1ULL << r;
    }

    long long s() const { return static_cast<long long>(L.size()); }

    /// Membership of r in L mod q, Euclidean normalization for negative r.
    bool in_L(long long r) const { return l_mask_ >> mod_euclid(r, pp.q) & 1; }

    std::uint64_t l_mask() const { return l_mask_; }

private:
    std::uint64_t l_mask_;
};

/// Outcome of a family predicate: ok, or the first violation (lexicographic
/// index order) with the offending set indices (0-based) and a description.
struct PredicateReport {
    bool ok = true;
    std::vector<std::size_t> witness; // indices of the offending sets
    std::string detail;

    explicit operator bool() const { return ok; }
};

/// |E| not in L (mod q) for every member E.
inline PredicateReport is_L_avoiding(const SetSystem& f, const ModContext& ctx)
{
    for (std::size_t i = 0; i < f.sets.size(); ++i) {
        long long sz = std::popcount(f.sets[i]);
        if (ctx.in_L(sz)) {
            PredicateReport r;
            r.ok = false;
            r.witness = {i};
            r.detail = "set #" + std::to_string(i + 1) + " " + render_set(f.sets[i]) + " has size " +
                       std::to_string(sz) + " in L (mod q)";
            return r;
        }
    }
    return {};
}

namespace detail {

template <typename Fn>
inline bool for_each_combination(std::size_t m, std::size_t k, Fn&& fn)
{
    if (k > m)
        return true;
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i)
        pick[i] = i;
    while (true) {
        if (!fn(pick))
            return false;
        std::size_t pos = k;
        while (pos > 0 && pick[pos - 1] == m - k + (pos - 1))
            --pos;
        if (pos == 0)
            return true;
        ++pick[pos - 1];
        for (std::size_t i = pos; i < k; ++i)
            pick[i] = pick[i - 1] + 1;
    }
}

} // namespace detail

/// |E_1 cap ... cap E_k| in L (mod q) for every k distinct members
/// (vacuously true when |F| < k). Reports the lexicographically first
/// violating k-tuple.
inline PredicateReport is_kwise_L_intersecting(const SetSystem& f, const ModContext& ctx)
{
    PredicateReport r;
    detail::for_each_combination(f.sets.size(), static_cast<std::size_t>(ctx.k),
                                 [&](const std::vector<std::size_t>& pick) {
                                     std::uint64_t inter = ~0ULL;
                                     for (std::size_t i : pick)
                                         inter &= f.sets[i];
                                     long long sz = std::popcount(inter);
                                     if (!ctx.in_L(sz)) {
                                         r.ok = false;
                                         r.witness = pick;
                                         std::ostringstream d;
                                         d << "sets {";
                                         for (std::size_t i = 0; i < pick.size(); ++i)
                                             d << (i ? "," : "") << "#" << (pick[i] + 1);
                                         d << "} intersect in size " << sz << " outside L (mod q)";
                                         r.detail = d.str();
                                         return false;
                                     }
                                     return true;
                                 });
    return r;
}

/// |E \ F| in L (mod q) for all ordered pairs of distinct members.
inline PredicateReport is_differencing_sperner(const SetSystem& f, const ModContext& ctx)
{
    for (std::size_t i = 0; i < f.sets.size(); ++i)
        for (std::size_t j = 0; j < f.sets.size(); ++j) {
            if (i == j)
                continue;
            long long sz = std::popcount(f.sets[i] & ~f.sets[j]);
            if (!ctx.in_L(sz)) {
                PredicateReport r;
                r.ok = false;
                r.witness = {i, j};
                r.detail = "|set #" + std::to_string(i + 1) + " \\ set #" + std::to_string(j + 1) +
                           "| = " + std::to_string(sz) + " outside L (mod q)";
                return r;
            }
        }
    return {};
}

// ---------------------------------------------------------------------------
// Bound calculators. One per theorem; all exact big-integer arithmetic.
// ---------------------------------------------------------------------------

struct BoundResult {
    BigInt value;
    std::optional<long long> D; // intermediate degree cap, where applicable
};

namespace detail {

inline BigInt sum_binom(long long n, long long lo, long long hi)
{
    if (n >= 0 && hi > n)
        hi = n; // C(n, j) = 0 past j = n
    BigInt acc = 0;
    for (long long j = lo; j <= hi; ++j)
        acc += binom_int(n, j);
    return acc;
}

inline void require(bool cond, const std::string& msg)
{
    if (!cond)
        throw std::invalid_argument(msg);
}

/// D = min(floor((1+(s-1)/alpha)^alpha), 2^(s-1)), exact: the first term is
/// (alpha+s-1)^alpha / alpha^alpha with integer floor division.
inline long long degree_cap_D(long long s, long long alpha)
{
    require(s >= 1, "bound: requires s >= 1");
    require(alpha >= 1, "bound: requires alpha >= 1");
    BigInt num = 1, den = 1;
    for (long long i = 0; i < alpha; ++i) {
        num *= alpha + s - 1;
        den *= alpha;
    }
    BigInt first = num / den;
    if (s - 1 < 62) {
        BigInt second = BigInt(1) << static_cast<unsigned>(s - 1);
        if (second < first)
            first = second;
    }
    return first.convert_to<long long>();
}

} // namespace detail

/// Prime-modulus bound: sum_{j=0}^{s} C(n, j).
inline BoundResult bound_dfs(long long n, long long s)
{
    detail::require(n >= 0, "bound dfs: requires n >= 0");
    detail::require(s >= 0, "bound dfs: requires s >= 0");
    return {detail::sum_binom(n, 0, s), std::nullopt};
}

/// Prime-power bound with degree cap D: sum_{j=0}^{D} C(n, j).
inline BoundResult bound_bfks(long long n, long long s, long long alpha)
{
    detail::require(n >= 0, "bound bfks: requires n >= 0");
    long long D = detail::degree_cap_D(s, alpha);
    return {detail::sum_binom(n, 0, D), D};
}

/// (q-s) * sum_{j=0}^{q-1} C(n-1, j).
inline BoundResult bound_xy(long long n, long long s, long long q)
{
    PrimePower::from_q(q);
    detail::require(n >= 1, "bound xy: requires n >= 1");
    detail::require(s >= 1 && s < q, "bound xy: requires 1 <= s < q");
    return {BigInt(q - s) * detail::sum_binom(n - 1, 0, q - 1), std::nullopt};
}

/// Differencing-Sperner bound for the interval L = {b-s+1..b}:
/// sum_{j=0}^{s} C(n-1, j), valid when C(b, s) is nonzero mod p.
inline BoundResult bound_xy2(long long n, long long s, long long b, const PrimePower& pp)
{
    detail::require(n >= 1, "bound xy2: requires n >= 1");
    detail::require(s >= 1, "bound xy2: requires s >= 1");
    detail::require(s <= b && b < pp.q, "bound xy2: requires s <= b < q");
    detail::require(binom_int(b, s) % pp.p != 0,
                    "bound xy2: hypothesis C(b, s) != 0 (mod p) fails");
    return {detail::sum_binom(n - 1, 0, s), std::nullopt};
}

/// L = {1..s} with all member sizes divisible by q: sum_{j=0}^{s} C(n-1, j).
inline BoundResult bound_main2(long long n, long long s, long long q)
{
    PrimePower::from_q(q);
    detail::require(n >= 1, "bound main2: requires n >= 1");
    detail::require(s >= 1 && s < q, "bound main2: requires 1 <= s < q");
    return {detail::sum_binom(n - 1, 0, s), std::nullopt};
}

/// k-wise bound: (k-1) * sum_{j=0}^{q-1} C(n, j).
inline BoundResult bound_main3(long long n, long long q, long long k)
{
    PrimePower::from_q(q);
    detail::require(n >= 0, "bound main3: requires n >= 0");
    detail::require(k >= 2, "bound main3: requires k >= 2");
    return {BigInt(k - 1) * detail::sum_binom(n, 0, q - 1), std::nullopt};
}

/// Size-windowed k-wise bound: (k-1) * sum_{j=q-t}^{q-1} C(n, j).
inline BoundResult bound_main4(long long n, long long q, long long k, long long t)
{
    PrimePower::from_q(q);
    detail::require(n >= 0, "bound main4: requires n >= 0");
    detail::require(k >= 2, "bound main4: requires k >= 2");
    detail::require(t >= 1 && t <= q - 1, "bound main4: requires 1 <= t <= q-1");
    return {BigInt(k - 1) * detail::sum_binom(n, q - t, q - 1), std::nullopt};
}

/// m(n, s, q) <= sum_{j=0}^{q-1} C(n, j), uniformly in s.
inline BoundResult bound_corollary(long long n, long long q)
{
    PrimePower::from_q(q);
    detail::require(n >= 0, "bound corollary: requires n >= 0");
    return {detail::sum_binom(n, 0, q - 1), std::nullopt};
}

/// Separator-degree k-wise bound: (k-1) * sum_{j=0}^{D} C(n, j).
inline BoundResult bound_main5(long long n, long long s, long long alpha, long long k)
{
    detail::require(n >= 0, "bound main5: requires n >= 0");
    detail::require(k >= 2, "bound main5: requires k >= 2");
    long long D = detail::degree_cap_D(s, alpha);
    return {BigInt(k - 1) * detail::sum_binom(n, 0, D), D};
}

/// Size-windowed variant: (k-1) * sum_{j=D-t+1}^{D} C(n, j). The size window
/// {D-t+1..D} is a set of residues mod q, so the calculator insists on
/// t <= D and D <= q-1; outside that domain the window is ambiguous as a
/// residue threshold and the parameters are rejected.
inline BoundResult bound_main5_t(long long n, long long s, const PrimePower& pp, long long k,
                                 long long t)
{
    detail::require(n >= 0, "bound main5_t: requires n >= 0");
    detail::require(k >= 2, "bound main5_t: requires k >= 2");
    detail::require(s < pp.q, "bound main5_t: requires s < q");
    long long D = detail::degree_cap_D(s, pp.alpha);
    detail::require(t >= 1 && t <= D, "bound main5_t: requires 1 <= t <= D");
    detail::require(D <= pp.q - 1,
                    "bound main5_t: requires D <= q-1 (window {D-t+1..D} is ambiguous as a "
                    "residue set otherwise)");
    return {BigInt(k - 1) * detail::sum_binom(n, D - t + 1, D), D};
}

/// Conjectured bound for t arbitrary size residues: (k-1) * sum_{j=q-t}^{q-1} C(n, j).
inline BoundResult bound_conjecture(long long n, long long q, long long k, long long t)
{
    PrimePower::from_q(q);
    detail::require(n >= 0, "bound conjecture: requires n >= 0");
    detail::require(k >= 2, "bound conjecture: requires k >= 2");
    detail::require(t >= 1 && t <= q - 1, "bound conjecture: requires 1 <= t <= q-1");
    return {BigInt(k - 1) * detail::sum_binom(n, q - t, q - 1), std::nullopt};
}

/// Name-dispatched calculator, the CLI entry point. `params` keys: n, s, q,
/// p, alpha, k, t, b as each theorem requires.
inline BoundResult bound(const std::string& name, const std::map<std::string, long long>& params)
{
    auto get = [&](const char* key) {
        auto it = params.find(key);
        if (it == params.end())
            throw std::invalid_argument("bound " + name + ": missing parameter --" +
                                        std::string(key));
        return it->second;
    };
    auto pp_of = [&]() {
        if (params.count("q")) {
            PrimePower pp = PrimePower::from_q(get("q"));
            if (params.count("p") && params.at("p") != pp.p)
                throw std::invalid_argument("bound " + name + ": p does not match q");
            if (params.count("alpha") && params.at("alpha") != pp.alpha)
                throw std::invalid_argument("bound " + name + ": alpha does not match q");
            return pp;
        }
        return PrimePower(get("p"), get("alpha"));
    };

    if (name == "dfs")
        return bound_dfs(get("n"), get("s"));
    if (name == "bfks")
        return bound_bfks(get("n"), get("s"), get("alpha"));
    if (name == "xy")
        return bound_xy(get("n"), get("s"), get("q"));
    if (name == "xy2")
        return bound_xy2(get("n"), get("s"), get("b"), pp_of());
    if (name == "main2")
        return bound_main2(get("n"), get("s"), get("q"));
    if (name == "main3")
        return bound_main3(get("n"), get("q"), get("k"));
    if (name == "main4")
        return bound_main4(get("n"), get("q"), get("k"), get("t"));
    if (name == "corollary")
        return bound_corollary(get("n"), get("q"));
    if (name == "main5")
        return bound_main5(get("n"), get("s"), get("alpha"), get("k"));
    if (name == "main5_t")
        return bound_main5_t(get("n"), get("s"), pp_of(), get("k"), get("t"));
    if (name == "conjecture")
        return bound_conjecture(get("n"), get("q"), get("k"), get("t"));
    throw std::invalid_argument("bound: unknown theorem id '" + name + "'");
}

} // namespace modset

#endif
