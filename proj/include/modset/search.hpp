#ifndef MODSET_SEARCH_HPP
#define MODSET_SEARCH_HPP

#include <modset/families.hpp>

#include <bit>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace modset {

enum class SearchMode { pairwise, kwise, differencing, main2, main4 };

inline std::string mode_name(SearchMode m)
{
    switch (m) {
    case SearchMode::pairwise: return "pairwise";
    case SearchMode::kwise: return "kwise";
    case SearchMode::differencing: return "differencing";
    case SearchMode::main2: return "main2";
    case SearchMode::main4: return "main4";
    }
    return "?";
}

inline SearchMode parse_mode(const std::string& s)
{
    if (s == "pairwise")
        return SearchMode::pairwise;
    if (s == "kwise")
        return SearchMode::kwise;
    if (s == "differencing")
        return SearchMode::differencing;
    if (s == "main2")
        return SearchMode::main2;
    if (s == "main4")
        return SearchMode::main4;
    throw std::invalid_argument("unknown search mode '" + s + "'");
}

struct SearchOptions {
    long long node_budget = 100'000'000;
};

struct SearchResult {
    long long max_size = 0;
    SetSystem witness;
    long long nodes = 0;
    bool exhaustive = true; // false once the node budget cut the search short
};

namespace detail {

// Fixed-width bitset over candidate indices.
struct CandSet {
    std::vector<std::uint64_t> w;

    explicit CandSet(std::size_t nbits = 0) : w((nbits + 63) / 64, 0) {}
    void set(std::size_t i) { w[i >> 6] |= 1ULL << (i & 63); }
    bool test(std::size_t i) const { return w[i >> 6] >> (i & 63) & 1; }
    std::size_t count() const
    {
        std::size_t c = 0;
        for (auto b : w)
            c += static_cast<std::size_t>(std::popcount(b));
        return c;
    }
    bool empty() const
    {
        for (auto b : w)
            if (b)
                return false;
        return true;
    }
    void intersect(const CandSet& o)
    {
        for (std::size_t i = 0; i < w.size(); ++i)
            w[i] &= o.w[i];
    }
    /// Clears indices <= i.
    void clear_through(std::size_t i)
    {
        std::size_t blk = i >> 6, off = i & 63;
        for (std::size_t b = 0; b < blk; ++b)
            w[b] = 0;
        if (blk < w.size())
            w[blk] &= off == 63 ? 0ULL : ~((2ULL << off) - 1);
    }
    template <typename Fn>
    void for_each(Fn&& fn) const
    {
        for (std::size_t b = 0; b < w.size(); ++b) {
            std::uint64_t x = w[b];
            while (x) {
                std::size_t i = (b << 6) + static_cast<std::size_t>(std::countr_zero(x));
                if (!fn(i))
                    return;
                x &= x - 1;
            }
        }
    }
};

/// Greedy proper coloring of the compatibility subgraph induced by P; any
/// family inside P is a clique there, so the color count is a sound upper
/// bound on how many sets can still be added.
inline std::size_t color_bound(const CandSet& P, const std::vector<CandSet>& adj)
{
    std::vector<CandSet> classes; // pairwise-incompatible groups
    std::size_t colors = 0;
    P.for_each([&](std::size_t v) {
        bool placed = false;
        for (auto& cls : classes) {
            bool clash = false;
            for (std::size_t b = 0; b < cls.w.size() && !clash; ++b)
                if (cls.w[b] & adj[v].w[b])
                    clash = true;
            if (!clash) {
                cls.set(v);
                placed = true;
                break;
            }
        }
        if (!placed) {
            classes.emplace_back(CandSet(adj.size()));
            classes.back().set(v);
            ++colors;
        }
        return true;
    });
    return colors;
}

struct GraphSearch {
    const std::vector<std::uint64_t>& cand;
    const std::vector<CandSet>& adj;
    long long budget;
    long long nodes = 0;
    bool exhausted_budget = false;
    std::vector<std::size_t> cur, best;

    GraphSearch(const std::vector<std::uint64_t>& c, const std::vector<CandSet>& a, long long b)
        : cand(c), adj(a), budget(b)
    {
    }

    void run()
    {
        CandSet all(cand.size());
        for (std::size_t i = 0; i < cand.size(); ++i)
            all.set(i);
        expand(all);
    }

    void expand(CandSet P)
    {
        if (++nodes > budget) {
            exhausted_budget = true;
            return;
        }
        if (cur.size() > best.size())
            best = cur;
        std::size_t remaining = P.count();
        if (cur.size() + remaining <= best.size())
            return;
        if (remaining >= 8 && cur.size() + color_bound(P, adj) <= best.size())
            return;
        std::vector<std::size_t> order;
        order.reserve(remaining);
        P.for_each([&](std::size_t v) {
            order.push_back(v);
            return true;
        });
        for (std::size_t idx = 0; idx < order.size(); ++idx) {
            if (cur.size() + (order.size() - idx) <= best.size())
                return;
            if (exhausted_budget)
                return;
            std::size_t v = order[idx];
            CandSet P2 = P;
            P2.intersect(adj[v]);
            P2.clear_through(v);
            cur.push_back(v);
            expand(std::move(P2));
            cur.pop_back();
        }
    }
};

/// k >= 3: candidate d may join the family only if every k-subset it
/// completes intersects inside L. Feasible lists are filtered incrementally:
/// when c joins a family S, survivors must meet |cap(U) & c & d| in L for
/// every (k-2)-subset U of S.
struct KwiseSearch {
    const std::vector<std::uint64_t>& cand;
    const ModContext& ctx;
    long long budget;
    long long nodes = 0;
    bool exhausted_budget = false;
    std::vector<std::size_t> cur, best;
    std::vector<std::uint64_t> cur_masks;

    KwiseSearch(const std::vector<std::uint64_t>& c, const ModContext& x, long long b)
        : cand(c), ctx(x), budget(b)
    {
    }

    void run()
    {
        std::vector<std::size_t> all(cand.size());
        for (std::size_t i = 0; i < cand.size(); ++i)
            all[i] = i;
        expand(all);
    }

    bool joint_ok(std::uint64_t c, std::uint64_t d) const
    {
        std::size_t u = static_cast<std::size_t>(ctx.k) - 2;
        if (cur_masks.size() < u)
            return true;
        bool ok = true;
        for_each_combination(cur_masks.size(), u, [&](const std::vector<std::size_t>& pick) {
            std::uint64_t inter = c & d;
            for (std::size_t i : pick)
                inter &= cur_masks[i];
            if (!ctx.in_L(std::popcount(inter))) {
                ok = false;
                return false;
            }
            return true;
        });
        return ok;
    }

    void expand(const std::vector<std::size_t>& P)
    {
        if (++nodes > budget) {
            exhausted_budget = true;
            return;
        }
        if (cur.size() > best.size())
            best = cur;
        for (std::size_t idx = 0; idx < P.size(); ++idx) {
            if (cur.size() + (P.size() - idx) <= best.size())
                return;
            if (exhausted_budget)
                return;
            std::size_t v = P[idx];
            std::vector<std::size_t> P2;
            P2.reserve(P.size() - idx);
            for (std::size_t j = idx + 1; j < P.size(); ++j)
                if (joint_ok(cand[v], cand[P[j]]))
                    P2.push_back(P[j]);
            cur.push_back(v);
            cur_masks.push_back(cand[v]);
            expand(P2);
            cur_masks.pop_back();
            cur.pop_back();
        }
    }
};

inline bool size_admissible(long long sz, const ModContext& ctx, SearchMode mode,
                            std::uint64_t residue_mask)
{
    long long r = mod_euclid(sz, ctx.pp.q);
    switch (mode) {
    case SearchMode::pairwise:
    case SearchMode::kwise:
        return !ctx.in_L(sz);
    case SearchMode::differencing:
        return true;
    case SearchMode::main2:
        return !ctx.in_L(sz) && r == 0;
    case SearchMode::main4:
        return !ctx.in_L(sz) && (residue_mask >> r & 1);
    }
    return false;
}

inline bool pair_compatible(std::uint64_t a, std::uint64_t b, const ModContext& ctx,
                            SearchMode mode)
{
    if (mode == SearchMode::differencing)
        return ctx.in_L(std::popcount(a & ~b)) && ctx.in_L(std::popcount(b & ~a));
    return ctx.in_L(std::popcount(a & b));
}

inline SearchResult max_family_impl(int n, const ModContext& ctx, SearchMode mode,
                                    std::uint64_t residue_mask, const SearchOptions& opts)
{
    if (n < 0 || n > 24)
        throw std::invalid_argument("max_family: n out of tractable range [0, 24]");
    if (opts.node_budget < 1)
        throw std::invalid_argument("max_family: node budget must be positive");

    std::vector<std::uint64_t> cand;
    std::uint64_t limit = 1ULL << n;
    for (std::uint64_t m = 0; m < limit; ++m)
        if (size_admissible(std::popcount(m), ctx, mode, residue_mask))
            cand.push_back(m);

    long long k = mode == SearchMode::pairwise || mode == SearchMode::differencing ||
                          mode == SearchMode::main2
                      ? 2
                      : ctx.k;

    SearchResult res;
    std::vector<std::size_t> best;
    if (k == 2) {
        std::vector<detail::CandSet> adj(cand.size(), detail::CandSet(cand.size()));
        for (std::size_t i = 0; i < cand.size(); ++i)
            for (std::size_t j = i + 1; j < cand.size(); ++j)
                if (pair_compatible(cand[i], cand[j], ctx, mode)) {
                    adj[i].set(j);
                    adj[j].set(i);
                }
        GraphSearch gs{cand, adj, opts.node_budget};
        gs.run();
        res.nodes = gs.nodes;
        res.exhaustive = !gs.exhausted_budget;
        best = gs.best;
    } else {
        KwiseSearch ks{cand, ctx, opts.node_budget};
        ks.run();
        res.nodes = ks.nodes;
        res.exhaustive = !ks.exhausted_budget;
        best = ks.best;
    }

    std::vector<std::uint64_t> masks;
    masks.reserve(best.size());
    for (std::size_t i : best)
        masks.push_back(cand[i]);
    res.witness = SetSystem(n, masks);
    res.max_size = static_cast<long long>(best.size());

    // The witness must survive the family predicates it was searched under.
    ModContext wctx(ctx.pp, ctx.L, k, ctx.t);
    if (mode == SearchMode::differencing) {
        if (!is_differencing_sperner(res.witness, wctx))
            throw std::logic_error("max_family: witness fails the differencing predicate");
    } else {
        if (!is_L_avoiding(res.witness, wctx))
            throw std::logic_error("max_family: witness fails L-avoidance");
        if (!is_kwise_L_intersecting(res.witness, wctx))
            throw std::logic_error("max_family: witness fails the intersection predicate");
    }
    return res;
}

} // namespace detail

/// Maximum family under the chosen predicate set, by canonical-order
/// branch-and-bound: candidates are the admissible subsets in increasing
/// bitmask order, each family is extended only past its last member, and a
/// subtree is cut when even its full candidate pool (or a greedy coloring
/// cap, for the pairwise modes) cannot beat the incumbent. The witness is
/// the first maximum in enumeration order, so results are deterministic.
inline SearchResult max_family(int n, const ModContext& ctx, SearchMode mode,
                               const SearchOptions& opts = {})
{
    std::uint64_t residue_mask = 0;
    if (mode == SearchMode::main4) {
        if (!ctx.t)
            throw std::invalid_argument("max_family: main4 mode needs ctx.t");
        for (long long r = ctx.pp.q - *ctx.t; r <= ctx.pp.q - 1; ++r)
            residue_mask |= 1ULL << r;
    }
    if (mode == SearchMode::kwise && ctx.k < 2)
        throw std::invalid_argument("max_family: kwise mode needs k >= 2");
    return detail::max_family_impl(n, ctx, mode, residue_mask, opts);
}

struct EmpiricalM {
    BigInt value = 0;
    bool exhaustive = true;
    long long nodes = 0;
};

/// m(n, s, q) at desk scale: the best pairwise search over every L of size
/// exactly s.
inline EmpiricalM empirical_m(int n, long long s, const PrimePower& pp,
                              const SearchOptions& opts = {})
{
    if (s < 1 || s >= pp.q)
        throw std::invalid_argument("empirical_m: requires 1 <= s < q");
    EmpiricalM out;
    std::vector<int> L;
    auto rec = [&](auto&& self, int from, long long left) -> void {
        if (left == 0) {
            ModContext ctx(pp, L, 2);
            SearchResult r = max_family(n, ctx, SearchMode::pairwise, opts);
            out.nodes += r.nodes;
            out.exhaustive = out.exhaustive && r.exhaustive;
            if (BigInt(r.max_size) > out.value)
                out.value = r.max_size;
            return;
        }
        for (int v = from; v <= static_cast<int>(pp.q) - static_cast<int>(left); ++v) {
            L.push_back(v);
            self(self, v + 1, left - 1);
            L.pop_back();
        }
    };
    rec(rec, 0, s);
    return out;
}

struct ConjectureReport {
    SearchResult search;
    BigInt bound = 0;
    bool consistent = true;
    std::vector<int> residues;
};

/// Probes the windowed k-wise inequality with an arbitrary residue set
/// {k_1..k_t} in place of {q-t..q-1}: searches the max family whose sizes
/// fall in the residue set (and avoid L) and compares against
/// (k-1) * sum_{j=q-t}^{q-1} C(n, j).
inline ConjectureReport conjecture_probe(int n, const PrimePower& pp, long long k,
                                         const std::vector<int>& residues,
                                         const std::vector<int>& L,
                                         const SearchOptions& opts = {})
{
    if (residues.empty() || static_cast<long long>(residues.size()) > pp.q - 1)
        throw std::invalid_argument("conjecture_probe: need 1 <= t <= q-1 residues");
    std::uint64_t rmask = 0;
    for (int r : residues) {
        if (r < 0 || r >= pp.q)
            throw std::invalid_argument("conjecture_probe: residue outside [0, q-1]");
        if (rmask >> r & 1)
            throw std::invalid_argument("conjecture_probe: repeated residue");
        rmask |= 1ULL << r;
    }
    ModContext ctx(pp, L, k);
    ConjectureReport rep;
    rep.residues = residues;
    std::sort(rep.residues.begin(), rep.residues.end());
    rep.search = detail::max_family_impl(n, ctx, SearchMode::main4, rmask, opts);
    rep.bound =
        bound_conjecture(n, pp.q, k, static_cast<long long>(residues.size())).value;
    rep.consistent = BigInt(rep.search.max_size) <= rep.bound;
    return rep;
}

// ---------------------------------------------------------------------------
// Sweeps: grid runs of max_family against the matching theorem bound.
// ---------------------------------------------------------------------------

struct SweepRow {
    long long n = 0;
    long long q = 0;
    std::vector<int> L;
    long long k = 0;
    std::string mode_label; // "pairwise", "main4:t=2", ...
    long long max_size = 0;
    std::string bound_name;
    BigInt bound_value = 0;
    bool exhaustive = true;
    long long nodes = 0;
    bool violated = false;
};

inline std::string render_residues(const std::vector<int>& L)
{
    std::string out;
    for (std::size_t i = 0; i < L.size(); ++i) {
        if (i)
            out += "|";
        out += std::to_string(L[i]);
    }
    return out;
}

inline std::string sweep_csv_header()
{
    return "n,q,L,k,mode,max_size,bound_name,bound_value,exhaustive,nodes";
}

inline std::string render_sweep_row(const SweepRow& r)
{
    std::ostringstream out;
    out << r.n << "," << r.q << "," << render_residues(r.L) << "," << r.k << "," << r.mode_label
        << "," << r.max_size << "," << r.bound_name << "," << r.bound_value << ","
        << (r.exhaustive ? "true" : "false") << "," << r.nodes;
    return out.str();
}

struct SweepSpec {
    std::vector<long long> qs;
    long long n_min = 1;
    long long n_max = 0;
    std::vector<long long> ks = {2};
    std::vector<SearchMode> modes = {SearchMode::pairwise};
    SearchOptions opts;
};

namespace detail {

inline bool interval_for_xy2(const std::vector<int>& L, const PrimePower& pp, long long& b,
                             long long& s)
{
    if (L.empty())
        return false;
    s = static_cast<long long>(L.size());
    b = L.back();
    for (std::size_t i = 0; i < L.size(); ++i)
        if (L[i] != L.front() + static_cast<int>(i))
            return false;
    if (!(s <= b && b < pp.q) || L.front() != b - s + 1)
        return false;
    return binom_int(b, s) % pp.p != 0;
}

inline bool is_prefix_interval(const std::vector<int>& L)
{
    for (std::size_t i = 0; i < L.size(); ++i)
        if (L[i] != static_cast<int>(i) + 1)
            return false;
    return !L.empty();
}

} // namespace detail

/// Runs the grid: every q, every proper nonempty L, the requested k values
/// and modes, n from n_min to n_max. Rows whose mode has no applicable bound
/// for the given L (main2 needs L = {1..s}, differencing needs the interval
/// hypothesis of the Sperner bound) are skipped. Row order is the grid
/// iteration order, so output is deterministic.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec)
{
    std::vector<SweepRow> rows;
    for (long long q : spec.qs) {
        PrimePower pp = PrimePower::from_q(q);
        for (std::uint64_t lbits = 1; lbits + 1 < (1ULL << q); ++lbits) {
            std::vector<int> L;
            for (int r = 0; r < q; ++r)
                if (lbits >> r & 1)
                    L.push_back(r);
            for (long long k : spec.ks) {
                for (SearchMode mode : spec.modes) {
                    bool pairlike = mode == SearchMode::pairwise ||
                                    mode == SearchMode::differencing ||
                                    mode == SearchMode::main2;
                    if (pairlike && k != 2)
                        continue; // these modes are inherently pairwise
                    long long b = 0, s = 0;
                    if (mode == SearchMode::differencing &&
                        !detail::interval_for_xy2(L, pp, b, s))
                        continue;
                    if (mode == SearchMode::main2 && !detail::is_prefix_interval(L))
                        continue;
                    std::vector<long long> ts = {0};
                    if (mode == SearchMode::main4) {
                        ts.clear();
                        for (long long t = 1; t <= q - 1; ++t)
                            ts.push_back(t);
                    }
                    for (long long t : ts) {
                        for (long long n = spec.n_min; n <= spec.n_max; ++n) {
                            ModContext ctx(pp, L, k,
                                           mode == SearchMode::main4
                                               ? std::optional<long long>(t)
                                               : std::nullopt);
                            SearchResult sr =
                                max_family(static_cast<int>(n), ctx, mode, spec.opts);
                            SweepRow row;
                            row.n = n;
                            row.q = q;
                            row.L = L;
                            row.k = k;
                            row.mode_label = mode_name(mode);
                            if (mode == SearchMode::main4)
                                row.mode_label += ":t=" + std::to_string(t);
                            row.max_size = sr.max_size;
                            switch (mode) {
                            case SearchMode::pairwise:
                            case SearchMode::kwise:
                                row.bound_name = "main3";
                                row.bound_value = bound_main3(n, q, k).value;
                                break;
                            case SearchMode::differencing:
                                row.bound_name = "xy2";
                                row.bound_value = bound_xy2(n, s, b, pp).value;
                                break;
                            case SearchMode::main2:
                                row.bound_name = "main2";
                                row.bound_value =
                                    bound_main2(n, static_cast<long long>(L.size()), q).value;
                                break;
                            case SearchMode::main4:
                                row.bound_name = "main4";
                                row.bound_value = bound_main4(n, q, k, t).value;
                                break;
                            }
                            row.exhaustive = sr.exhaustive;
                            row.nodes = sr.nodes;
                            row.violated = BigInt(row.max_size) > row.bound_value;
                            rows.push_back(std::move(row));
                        }
                    }
                }
            }
        }
    }
    return rows;
}

} // namespace modset

#endif
