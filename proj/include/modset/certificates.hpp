#ifndef MODSET_CERTIFICATES_HPP
#define MODSET_CERTIFICATES_HPP

#include <modset/families.hpp>
#include <modset/int_poly.hpp>
#include <modset/multilinear.hpp>

#include <bit>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace modset {

/// One round of the pairing procedure: the batch of sets removed this round
/// (indices into the input family, in removal order), X = first set of the
/// batch, Y = intersection of the whole batch.
struct PairingRound {
    std::vector<std::size_t> batch;
    std::uint64_t X = 0;
    std::uint64_t Y = 0;
};

struct PairingCertificate {
    std::vector<PairingRound> rounds;
    std::size_t m() const { return rounds.size(); }
};

/// Extracts (X_i, Y_i) pairs: repeatedly take the first remaining set, then
/// keep absorbing the first remaining set whose inclusion leaves the running
/// intersection size outside L (mod q), until no set qualifies. Order of the
/// input family is the only tie-breaker, so the output is deterministic.
///
/// Preconditions (checked): the family avoids L in sizes and is k-wise
/// L-intersecting. A batch can then never exceed k-1 sets: a batch of k
/// would be k distinct members whose intersection size lies outside L.
inline PairingCertificate greedy_pairing(const SetSystem& f, const ModContext& ctx)
{
    if (auto r = is_L_avoiding(f, ctx); !r)
        throw std::invalid_argument("greedy_pairing: family is not L-avoiding: " + r.detail);
    if (auto r = is_kwise_L_intersecting(f, ctx); !r)
        throw std::invalid_argument("greedy_pairing: family is not k-wise L-intersecting: " +
                                    r.detail);

    PairingCertificate cert;
    std::vector<bool> used(f.sets.size(), false);
    std::size_t remaining = f.sets.size();
    while (remaining > 0) {
        PairingRound round;
        std::size_t first = 0;
        while (used[first])
            ++first;
        round.batch.push_back(first);
        round.X = f.sets[first];
        std::uint64_t inter = f.sets[first];
        used[first] = true;
        --remaining;
        bool extended = true;
        while (extended) {
            extended = false;
            for (std::size_t j = 0; j < f.sets.size(); ++j) {
                if (used[j])
                    continue;
                std::uint64_t next = inter & f.sets[j];
                if (!ctx.in_L(std::popcount(next))) {
                    round.batch.push_back(j);
                    inter = next;
                    used[j] = true;
                    --remaining;
                    extended = true;
                    break;
                }
            }
        }
        round.Y = inter;
        cert.rounds.push_back(std::move(round));
    }

    // Postconditions. All are consequences of the preconditions; a failure
    // here is a bug, not bad input.
    for (std::size_t i = 0; i < cert.rounds.size(); ++i) {
        const PairingRound& r = cert.rounds[i];
        if (r.batch.size() > static_cast<std::size_t>(ctx.k - 1))
            throw std::logic_error("greedy_pairing: batch exceeds k-1 sets");
        if (ctx.in_L(std::popcount(r.Y)))
            throw std::logic_error("greedy_pairing: |Y| lies in L (mod q)");
        for (std::size_t t = i + 1; t < cert.rounds.size(); ++t)
            if (!ctx.in_L(std::popcount(cert.rounds[t].X & r.Y)))
                throw std::logic_error("greedy_pairing: |X_t cap Y_i| escapes L for t > i");
    }
    return cert;
}

/// Re-checks a pairing certificate against the family it claims to describe.
inline bool verify_pairing(const PairingCertificate& cert, const SetSystem& f,
                           const ModContext& ctx, std::string* why = nullptr)
{
    auto fail = [&](const std::string& msg) {
        if (why)
            *why = msg;
        return false;
    };
    std::vector<bool> seen(f.sets.size(), false);
    for (std::size_t i = 0; i < cert.rounds.size(); ++i) {
        const PairingRound& r = cert.rounds[i];
        if (r.batch.empty())
            return fail("round " + std::to_string(i + 1) + ": empty batch");
        if (r.batch.size() > static_cast<std::size_t>(ctx.k - 1))
            return fail("round " + std::to_string(i + 1) + ": batch larger than k-1");
        std::uint64_t inter = ~0ULL;
        for (std::size_t idx : r.batch) {
            if (idx >= f.sets.size())
                return fail("round " + std::to_string(i + 1) + ": set index out of range");
            if (seen[idx])
                return fail("round " + std::to_string(i + 1) + ": set #" +
                            std::to_string(idx + 1) + " appears twice");
            seen[idx] = true;
            inter &= f.sets[idx];
        }
        if (r.X != f.sets[r.batch.front()])
            return fail("round " + std::to_string(i + 1) + ": X is not the first batch set");
        if (r.Y != inter)
            return fail("round " + std::to_string(i + 1) + ": Y is not the batch intersection");
        if (ctx.in_L(std::popcount(r.Y)))
            return fail("round " + std::to_string(i + 1) + ": |Y| lies in L (mod q)");
    }
    for (std::size_t idx = 0; idx < seen.size(); ++idx)
        if (!seen[idx])
            return fail("set #" + std::to_string(idx + 1) + " is in no batch");
    for (std::size_t i = 0; i < cert.rounds.size(); ++i)
        for (std::size_t t = i + 1; t < cert.rounds.size(); ++t)
            if (!ctx.in_L(std::popcount(cert.rounds[t].X & cert.rounds[i].Y)))
                return fail("|X_" + std::to_string(t + 1) + " cap Y_" + std::to_string(i + 1) +
                            "| escapes L (mod q)");
    if (why)
        why->clear();
    return true;
}

/// G_i = the multilinear reduction of F_L(x . y_i) over F_p, one per round.
inline std::vector<MLPoly> build_Gi(const PairingCertificate& cert, const ModContext& ctx, int n)
{
    IntPoly fl = build_FL(ctx.L, ctx.pp);
    std::vector<MLPoly> out;
    out.reserve(cert.rounds.size());
    for (const PairingRound& r : cert.rounds) {
        MLPoly g = compose_inner(fl, r.Y, n, ctx.pp.p);
        if (ml_degree(g) > ctx.pp.q - 1)
            throw std::logic_error("build_Gi: degree exceeds q-1");
        out.push_back(std::move(g));
    }
    return out;
}

struct RankReport {
    std::size_t count = 0;
    std::size_t rank = 0;
    bool full_rank = true;
    bool triangular_ok = true;
};

/// Exact rank over F_p by Gaussian elimination; pivot = first row with a
/// nonzero entry in the leftmost unfinished column.
inline std::size_t rank_fp(std::vector<std::vector<long long>> mat, long long p)
{
    if (p < 2 || !is_prime(p))
        throw std::invalid_argument("rank_fp: p must be prime");
    if (mat.empty())
        return 0;
    std::size_t cols = mat[0].size();
    for (auto& row : mat) {
        if (row.size() != cols)
            throw std::invalid_argument("rank_fp: ragged matrix");
        for (auto& e : row)
            e = mod_euclid(e, p);
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < mat.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < mat.size() && mat[pivot][col] == 0)
            ++pivot;
        if (pivot == mat.size())
            continue;
        std::swap(mat[rank], mat[pivot]);
        long long inv = 1, base = mod_euclid(mat[rank][col], p), e = p - 2;
        while (e > 0) { // Fermat inverse
            if (e & 1)
                inv = inv * base % p;
            base = base * base % p;
            e >>= 1;
        }
        for (std::size_t r2 = rank + 1; r2 < mat.size(); ++r2) {
            long long factor = mat[r2][col] * inv % p;
            if (factor == 0)
                continue;
            for (std::size_t c2 = col; c2 < cols; ++c2)
                mat[r2][c2] = mod_euclid(mat[r2][c2] - factor * mat[rank][c2], p);
        }
        ++rank;
    }
    return rank;
}

/// Triangular Criterion: polys[i](vectors[i]) != 0 and polys[i](vectors[t]) = 0
/// for i < t imply independence, no elimination needed. When the pattern
/// fails, falls back to the rank of the evaluation matrix.
inline RankReport triangular_check(const std::vector<MLPoly>& polys,
                                   const std::vector<std::uint64_t>& vectors)
{
    if (polys.size() != vectors.size())
        throw std::invalid_argument("triangular_check: polys and vectors differ in length");
    RankReport rep;
    rep.count = polys.size();
    if (polys.empty()) {
        rep.rank = 0;
        rep.full_rank = true;
        rep.triangular_ok = true;
        return rep;
    }
    long long p = polys[0].p;
    std::vector<std::vector<long long>> eval(polys.size(),
                                             std::vector<long long>(vectors.size(), 0));
    for (std::size_t i = 0; i < polys.size(); ++i) {
        if (polys[i].p != p)
            throw std::invalid_argument("triangular_check: mixed characteristics");
        for (std::size_t t = 0; t < vectors.size(); ++t)
            eval[i][t] = ml_eval(polys[i], vectors[t]);
    }
    rep.triangular_ok = true;
    for (std::size_t i = 0; i < polys.size() && rep.triangular_ok; ++i) {
        if (eval[i][i] == 0)
            rep.triangular_ok = false;
        for (std::size_t t = i + 1; t < vectors.size() && rep.triangular_ok; ++t)
            if (eval[i][t] != 0)
                rep.triangular_ok = false;
    }
    if (rep.triangular_ok) {
        rep.rank = rep.count;
    } else {
        rep.rank = rank_fp(eval, p);
    }
    rep.full_rank = rep.rank == rep.count;
    return rep;
}

inline RankReport triangular_check(const std::vector<MLPoly>& polys,
                                   const std::vector<std::vector<int>>& vectors)
{
    std::vector<std::uint64_t> masks;
    masks.reserve(vectors.size());
    for (const auto& v : vectors) {
        std::uint64_t m = 0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (v[j] != 0 && v[j] != 1)
                throw std::invalid_argument("triangular_check: vector entries must be 0 or 1");
            if (v[j])
                m |= 1ULL << j;
        }
        masks.push_back(m);
    }
    return triangular_check(polys, masks);
}

namespace detail {

/// Column order for coefficient matrices: multilinear monomials x_S with
/// |S| <= max_deg, sorted by (degree, lexicographic element sequence).
inline std::vector<std::uint64_t> monomial_basis(int n, long long max_deg)
{
    std::vector<int> ground(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        ground[static_cast<std::size_t>(j)] = j;
    std::vector<std::uint64_t> basis;
    for (long long d = 0; d <= std::min<long long>(max_deg, n); ++d)
        for_each_subset_of_size(ground, d, [&](std::uint64_t s) { basis.push_back(s); });
    std::sort(basis.begin(), basis.end(), subset_lex_less);
    return basis;
}

inline std::vector<long long> coefficient_row(const MLPoly& f,
                                              const std::map<std::uint64_t, std::size_t>& col_of)
{
    std::vector<long long> row(col_of.size(), 0);
    for (const auto& [mask, c] : f.terms) {
        auto it = col_of.find(mask);
        if (it == col_of.end())
            throw std::logic_error("coefficient_row: monomial outside the basis");
        row[it->second] = c;
    }
    return row;
}

} // namespace detail

/// The combined independence report for the size-windowed k-wise theorem:
/// rows are the G_i from the pairing certificate plus the h_I family for
/// |I| <= q-1-t, written in the monomial basis of multilinear polynomials of
/// degree <= q-1.
struct Main4Report {
    std::size_t m = 0;            // pairing rounds
    std::size_t h_count = 0;      // Blokhuis polynomials
    std::size_t dim = 0;          // ambient dimension sum_{i<=q-1} C(n,i)
    std::size_t combined_rank = 0;
    std::size_t h_rank = 0;
    bool combined_full = false;   // combined_rank == m + h_count
    bool h_full = false;          // h_rank == h_count
    PairingCertificate cert;
    std::vector<MLPoly> G;
    std::vector<std::pair<std::uint64_t, MLPoly>> h;
};

/// Runs the pairing, builds the G_i and the h_I, and reports the two ranks.
/// The combined rank equalling m + #h is the theorem's engine; for alpha >= 2
/// the h family alone can already degenerate, so only the computed ranks are
/// reported, nothing is assumed.
inline Main4Report main4_certificate(const SetSystem& f, const ModContext& ctx)
{
    if (!ctx.t)
        throw std::invalid_argument("main4_certificate: ctx.t must be set");
    long long t = *ctx.t;
    for (std::size_t i = 0; i < f.sets.size(); ++i) {
        long long r = mod_euclid(std::popcount(f.sets[i]), ctx.pp.q);
        if (r < ctx.pp.q - t)
            throw std::invalid_argument("main4_certificate: set #" + std::to_string(i + 1) + " " +
                                        render_set(f.sets[i]) + " has size " +
                                        std::to_string(std::popcount(f.sets[i])) +
                                        " outside {q-t..q-1} (mod q)");
    }

    Main4Report rep;
    rep.cert = greedy_pairing(f, ctx);
    rep.m = rep.cert.m();
    rep.G = build_Gi(rep.cert, ctx, f.n);
    rep.h = blokhuis_family(f.n, ctx.pp, t);
    rep.h_count = rep.h.size();

    auto basis = detail::monomial_basis(f.n, ctx.pp.q - 1);
    rep.dim = basis.size();
    std::map<std::uint64_t, std::size_t> col_of;
    for (std::size_t c = 0; c < basis.size(); ++c)
        col_of[basis[c]] = c;

    std::vector<std::vector<long long>> rows;
    rows.reserve(rep.m + rep.h_count);
    for (const MLPoly& g : rep.G)
        rows.push_back(detail::coefficient_row(g, col_of));
    std::vector<std::vector<long long>> h_rows;
    h_rows.reserve(rep.h_count);
    for (const auto& [mask, poly] : rep.h) {
        h_rows.push_back(detail::coefficient_row(poly, col_of));
        rows.push_back(h_rows.back());
    }
    rep.combined_rank = rank_fp(rows, ctx.pp.p);
    rep.h_rank = rank_fp(h_rows, ctx.pp.p);
    rep.combined_full = rep.combined_rank == rep.m + rep.h_count;
    rep.h_full = rep.h_rank == rep.h_count;
    return rep;
}

} // namespace modset

#endif
