// Acceptance gate: nine desk-scale property suites, one verdict line each.
// Run with no arguments for the full gate, or pass criterion numbers to run a
// subset (e.g. ./acceptance 1 5 9). Exit code = number of failed criteria.

#include <modset/modset.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace modset;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<int> mask_to_residues(std::uint64_t m, long long q)
{
    std::vector<int> L;
    for (int r = 0; r < q; ++r)
        if (m >> r & 1)
            L.push_back(r);
    return L;
}

// Pascal-triangle binomials: additive recurrence, independent of the
// multiplicative falling-factorial path used by the library.
struct Pascal {
    std::vector<std::vector<BigInt>> rows;

    explicit Pascal(long long nmax)
    {
        rows.resize(static_cast<std::size_t>(nmax) + 1);
        for (long long n = 0; n <= nmax; ++n) {
            auto& row = rows[static_cast<std::size_t>(n)];
            row.assign(static_cast<std::size_t>(n) + 1, 1);
            for (long long j = 1; j < n; ++j)
                row[static_cast<std::size_t>(j)] =
                    rows[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(j - 1)] +
                    rows[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(j)];
        }
    }

    BigInt c(long long n, long long j) const
    {
        if (j < 0 || j > n)
            return 0;
        return rows[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)];
    }

    BigInt sum(long long n, long long lo, long long hi) const
    {
        BigInt acc = 0;
        for (long long j = std::max<long long>(lo, 0); j <= std::min(hi, n); ++j)
            acc += c(n, j);
        return acc;
    }
};

struct Outcome {
    bool ok = true;
    std::string note; // appended to the verdict line
    std::vector<std::string> diagnostics;

    void fail(const std::string& msg, std::size_t cap = 10)
    {
        ok = false;
        if (diagnostics.size() < cap)
            diagnostics.push_back(msg);
    }
};

// --------------------------------------------------------------- criterion 1

Outcome run_c1()
{
    constexpr double kLimit = 60.0;
    auto start = Clock::now();
    Outcome out;
    std::mt19937_64 rng(101);
    long long checked = 0;

    for (long long q : {2, 3, 4, 5, 7, 8, 9}) {
        PrimePower pp = PrimePower::from_q(q);
        std::vector<std::uint64_t> lmasks;
        std::uint64_t full = (1ULL << q) - 1;
        if (q <= 5) {
            for (std::uint64_t m = 1; m < full; ++m)
                lmasks.push_back(m);
        } else {
            for (int i = 0; i < 500; ++i)
                lmasks.push_back(1 + rng() % (full - 1));
        }
        for (std::uint64_t lm : lmasks) {
            ++checked;
            std::vector<int> L = mask_to_residues(lm, q);
            IntPoly fl = build_FL(L, pp);
            if (fl.degree() > q - 1)
                out.fail("q=" + std::to_string(q) + " L=" + render_residues(L) +
                         ": degree exceeds q-1");
            bool pattern_ok = true;
            for (long long t = -3 * q; t <= 3 * q && pattern_ok; ++t) {
                long long want = (lm >> mod_euclid(t, q) & 1) ? 0 : 1;
                pattern_ok = mod_euclid(eval_intpoly(fl, t), pp.p) == want;
            }
            if (!pattern_ok)
                out.fail("q=" + std::to_string(q) + " L=" + render_residues(L) +
                         ": value pattern mod p broken");
            std::vector<int> outside = mask_to_residues(~lm & full, q);
            SeparationReport rep = verify_separator(fl, outside, L, pp);
            if (!(rep.separated && rep.exact && rep.max_val_outside == Valuation::finite(0) &&
                  rep.min_val_inside >= Valuation::finite(1)))
                out.fail("q=" + std::to_string(q) + " L=" + render_residues(L) +
                         ": separation report not (0 < 1 <= inside, exact)");
        }
    }

    double el = seconds_since(start);
    if (el > kLimit)
        out.fail("runtime " + std::to_string(el) + "s exceeds " + std::to_string(kLimit) + "s");
    std::ostringstream n;
    n << checked << " residue sets, " << el << "s";
    out.note = n.str();
    return out;
}

// --------------------------------------------------------------- criterion 2

Outcome run_c2()
{
    constexpr double kLimit = 10.0;
    auto start = Clock::now();
    Outcome out;
    long long checked = 0;

    for (long long q : {2, 3, 4, 8, 9, 25}) {
        PrimePower pp = PrimePower::from_q(q);
        for (long long x = -50; x <= 50; ++x)
            for (long long j = 0; j < q; ++j) {
                ++checked;
                if (!check_binom_period(x, j, pp))
                    out.fail("period fails at q=" + std::to_string(q) + " x=" + std::to_string(x) +
                             " j=" + std::to_string(j));
            }
    }
    for (long long q : {2, 3, 4, 8, 9, 27}) {
        PrimePower pp = PrimePower::from_q(q);
        for (long long r = -200; r <= 200; ++r) {
            ++checked;
            if (!check_binomka(r, pp))
                out.fail("divisibility fails at q=" + std::to_string(q) +
                         " r=" + std::to_string(r));
        }
    }

    double el = seconds_since(start);
    if (el > kLimit)
        out.fail("runtime " + std::to_string(el) + "s exceeds " + std::to_string(kLimit) + "s");
    std::ostringstream n;
    n << checked << " instances, " << el << "s";
    out.note = n.str();
    return out;
}

// --------------------------------------------------------------- criterion 3

Outcome run_c3()
{
    constexpr double kLimit = 60.0;
    auto start = Clock::now();
    Outcome out;
    std::mt19937_64 rng(303);
    const long long primes[] = {2, 3, 5};

    for (int trial = 0; trial < 1000; ++trial) {
        int n = 1 + static_cast<int>(rng() % 10);
        long long p = primes[rng() % 3];
        long long deg = static_cast<long long>(rng() % 7);
        std::vector<BigInt> cs(static_cast<std::size_t>(deg) + 1);
        for (auto& c : cs)
            c = static_cast<long long>(rng() % 19) - 9;
        IntPoly h(std::move(cs));
        std::uint64_t y = rng() & ((1ULL << n) - 1);

        MLPoly G = compose_inner(h, y, n, p);
        std::vector<long long> want(static_cast<std::size_t>(n) + 1);
        for (long long c = 0; c <= n; ++c)
            want[static_cast<std::size_t>(c)] = mod_euclid(eval_intpoly(h, c), p);

        bool all_ok = true;
        for (std::uint64_t v = 0; v < (1ULL << n) && all_ok; ++v)
            all_ok = ml_eval(G, v) ==
                     want[static_cast<std::size_t>(std::popcount(v & y))];
        if (!all_ok)
            out.fail("trial " + std::to_string(trial) + ": composition disagrees on the cube");
        if (ml_degree(G) > std::min<long long>(std::max<long long>(h.degree(), 0),
                                               std::popcount(y)))
            out.fail("trial " + std::to_string(trial) + ": degree cap violated");
    }

    double el = seconds_since(start);
    if (el > kLimit)
        out.fail("runtime " + std::to_string(el) + "s exceeds " + std::to_string(kLimit) + "s");
    std::ostringstream n;
    n << "1000 instances, " << el << "s";
    out.note = n.str();
    return out;
}

// --------------------------------------------------------------- criterion 4

Outcome run_c4()
{
    auto start = Clock::now();
    Outcome out;
    std::mt19937_64 rng(404);
    SearchOptions opts;
    opts.node_budget = 50'000; // witnesses need to be valid, not maximum

    for (int trial = 0; trial < 200; ++trial) {
        int n = 4 + static_cast<int>(rng() % 9); // 4..12
        const long long qs[] = {2, 3, 4};
        PrimePower pp = PrimePower::from_q(qs[rng() % 3]);
        long long k = 2 + static_cast<long long>(rng() % 2);
        std::uint64_t lm = 1 + rng() % ((1ULL << pp.q) - 2);
        ModContext ctx(pp, mask_to_residues(lm, pp.q), k);

        SearchResult sr = max_family(
            n, ctx, k == 2 ? SearchMode::pairwise : SearchMode::kwise, opts);
        std::vector<std::uint64_t> sub;
        for (std::uint64_t s : sr.witness.sets)
            if (rng() & 1)
                sub.push_back(s);
        SetSystem f(n, sub);

        std::string tag = "trial " + std::to_string(trial) + " (n=" + std::to_string(n) +
                          " q=" + std::to_string(pp.q) + " L=" + render_residues(ctx.L) +
                          " k=" + std::to_string(k) + " |F|=" + std::to_string(f.size()) + ")";
        try {
            PairingCertificate cert = greedy_pairing(f, ctx);
            if (!verify_pairing(cert, f, ctx))
                out.fail(tag + ": certificate fails re-verification");
            for (const PairingRound& r : cert.rounds)
                if (r.batch.size() > static_cast<std::size_t>(k - 1))
                    out.fail(tag + ": batch exceeds k-1");
            auto G = build_Gi(cert, ctx, n);
            std::vector<std::uint64_t> xs;
            for (const PairingRound& r : cert.rounds)
                xs.push_back(r.X);
            if (!triangular_check(G, xs).triangular_ok)
                out.fail(tag + ": triangular criterion fails");
            BigInt m(cert.m());
            if (!(BigInt(f.size()) <= BigInt(k - 1) * m))
                out.fail(tag + ": |F| > (k-1)m");
            if (!(BigInt(k - 1) * m <=
                  BigInt(k - 1) * bound_corollary(n, pp.q).value))
                out.fail(tag + ": m exceeds the polynomial-space dimension");
            if (!(BigInt(f.size()) <= bound_main3(n, pp.q, k).value))
                out.fail(tag + ": |F| > main3 bound");
        } catch (const std::exception& e) {
            out.fail(tag + ": " + e.what());
        }
    }

    std::ostringstream n;
    n << "200 random families, " << seconds_since(start) << "s";
    out.note = n.str();
    return out;
}

// --------------------------------------------------------------- criterion 5

Outcome run_c5()
{
    constexpr double kLimit = 1800.0;
    auto start = Clock::now();
    Outcome out;
    long long cells = 0, partial = 0;

    auto sweep_part = [&](long long q, long long k, long long n_max, SearchMode mode) {
        PrimePower pp = PrimePower::from_q(q);
        for (std::uint64_t lm = 1; lm + 1 < (1ULL << q); ++lm) {
            ModContext ctx(pp, mask_to_residues(lm, q), k);
            for (long long n = 1; n <= n_max; ++n) {
                ++cells;
                SearchResult r = max_family(static_cast<int>(n), ctx, mode);
                if (!r.exhaustive)
                    ++partial;
                BigInt b = bound_main3(n, q, k).value;
                if (BigInt(r.max_size) > b)
                    out.fail("VIOLATION n=" + std::to_string(n) + " q=" + std::to_string(q) +
                             " L=" + render_residues(ctx.L) + " k=" + std::to_string(k) + ": " +
                             std::to_string(r.max_size) + " > " + b.str());
                if (k == 2 && b != bound_corollary(n, q).value)
                    out.fail("main3 != corollary at n=" + std::to_string(n) +
                             " q=" + std::to_string(q));
            }
        }
    };

    for (long long q : {2, 3, 4})
        sweep_part(q, 2, 9, SearchMode::pairwise);
    for (long long q : {2, 3})
        sweep_part(q, 3, 8, SearchMode::kwise);

    double el = seconds_since(start);
    if (el > kLimit)
        out.fail("runtime " + std::to_string(el) + "s exceeds " + std::to_string(kLimit) + "s");
    std::ostringstream n;
    n << cells << " cells, " << partial << " budget-capped, " << el << "s";
    out.note = n.str();
    return out;
}

// --------------------------------------------------------------- criterion 6

Outcome run_c6()
{
    auto start = Clock::now();
    Outcome out;
    ModContext base(PrimePower(2, 1), {0}, 2);
    for (int n = 3; n <= 8; ++n) {
        SearchResult r = max_family(n, base, SearchMode::pairwise);
        BigInt b = bound_main3(n, 2, 2).value;
        if (!r.exhaustive)
            out.fail("n=" + std::to_string(n) + ": search not exhaustive");
        if (r.max_size != n)
            out.fail("n=" + std::to_string(n) + ": max " + std::to_string(r.max_size) +
                     " != n");
        if (b != n + 1)
            out.fail("n=" + std::to_string(n) + ": bound " + b.str() + " != n+1");
        if (BigInt(n + 1) - BigInt(r.max_size) != 1)
            out.fail("n=" + std::to_string(n) + ": gap is not exactly 1");
    }
    std::ostringstream n;
    n << "n in [3,8], " << seconds_since(start) << "s";
    out.note = n.str();
    return out;
}

// --------------------------------------------------------------- criterion 7

Outcome run_c7()
{
    auto start = Clock::now();
    Outcome out;
    long long cells = 0, informational = 0;

    for (long long q : {2, 3, 4}) {
        PrimePower pp = PrimePower::from_q(q);
        for (std::uint64_t lm = 1; lm + 1 < (1ULL << q); ++lm) {
            std::vector<int> L = mask_to_residues(lm, q);
            for (long long t = 1; t <= q - 1; ++t) {
                for (long long n = 1; n <= 8; ++n) {
                    ++cells;
                    ModContext ctx(pp, L, 2, t);
                    std::string tag = "n=" + std::to_string(n) + " q=" + std::to_string(q) +
                                      " L=" + render_residues(L) + " t=" + std::to_string(t);
                    SearchResult r = max_family(static_cast<int>(n), ctx, SearchMode::main4);
                    if (!r.exhaustive) {
                        out.fail(tag + ": search not exhaustive");
                        continue;
                    }
                    if (BigInt(r.max_size) > bound_main4(n, q, 2, t).value)
                        out.fail("VIOLATION " + tag + ": " + std::to_string(r.max_size) + " > " +
                                 bound_main4(n, q, 2, t).value.str());
                    Main4Report rep = main4_certificate(r.witness, ctx);
                    BigInt h_expect = 0;
                    for (long long i = 0; i <= q - 1 - t; ++i)
                        h_expect += binom_int(n, i);
                    if (BigInt(rep.h_count) != h_expect)
                        out.fail(tag + ": h family has wrong cardinality");
                    if (pp.alpha == 1) {
                        if (rep.combined_rank != rep.m + rep.h_count)
                            out.fail(tag + ": combined rank " +
                                     std::to_string(rep.combined_rank) + " != m+h = " +
                                     std::to_string(rep.m + rep.h_count));
                    } else if (!rep.combined_full) {
                        ++informational; // recorded, not failing (open question)
                    }
                }
            }
        }
    }

    std::ostringstream n;
    n << cells << " cells, " << informational << " degenerate prime-power ranks, "
      << seconds_since(start) << "s";
    out.note = n.str();
    return out;
}

// --------------------------------------------------------------- criterion 8

Outcome run_c8()
{
    auto start = Clock::now();
    Outcome out;
    long long searched = 0, found = 0, inconclusive = 0;

    for (long long q : {4, 8, 9}) {
        PrimePower pp = PrimePower::from_q(q);
        for (long long s : {1, 2}) {
            long long D = separator_degree_cap(s, pp.alpha).convert_to<long long>();
            std::vector<std::uint64_t> lmasks;
            for (std::uint64_t lm = 1; lm < (1ULL << q); ++lm)
                if (std::popcount(lm) == s)
                    lmasks.push_back(lm);
            for (std::uint64_t lm : lmasks) {
                std::vector<int> L = mask_to_residues(lm, q);
                for (int nu = 0; nu < q; ++nu) {
                    if (lm >> nu & 1)
                        continue;
                    ++searched;
                    auto res = search_min_separator(nu, L, pp, D, q);
                    std::string tag = "q=" + std::to_string(q) + " L=" + render_residues(L) +
                                      " nu=" + std::to_string(nu);
                    if (!res) {
                        if (s == 1)
                            out.fail(tag + ": no degree-" + std::to_string(D) +
                                     " separator found (s=1 must succeed)");
                        else
                            ++inconclusive;
                        continue;
                    }
                    ++found;
                    if (res->degree > D)
                        out.fail(tag + ": degree above the cap");
                    if (!res->report.separated)
                        out.fail(tag + ": returned polynomial does not separate");
                }
            }
        }
    }

    std::ostringstream n;
    n << found << "/" << searched << " found, " << inconclusive << " inconclusive (s=2), "
      << seconds_since(start) << "s";
    out.note = n.str();
    return out;
}

// --------------------------------------------------------------- criterion 9

Outcome run_c9()
{
    auto start = Clock::now();
    Outcome out;
    Pascal pas(64);
    long long points = 0;

    auto expect = [&](const std::string& name, std::map<std::string, long long> params,
                      const BigInt& want, std::optional<long long> wantD = std::nullopt) {
        ++points;
        BoundResult got = bound(name, params);
        if (got.value != want)
            out.fail(name + ": value mismatch (got " + got.value.str() + ", oracle " +
                     want.str() + ")");
        if (wantD && (!got.D || *got.D != *wantD))
            out.fail(name + ": D mismatch");
    };

    // independent D: boost pow on cpp_int, not the library's loop
    auto oracle_D = [](long long s, long long alpha) {
        BigInt first = boost::multiprecision::pow(BigInt(alpha + s - 1),
                                                  static_cast<unsigned>(alpha)) /
                       boost::multiprecision::pow(BigInt(alpha), static_cast<unsigned>(alpha));
        BigInt second = boost::multiprecision::pow(BigInt(2), static_cast<unsigned>(s - 1));
        return std::min(first, second).convert_to<long long>();
    };

    for (long long n = 0; n <= 12; ++n)
        for (long long s = 0; s <= 6; ++s)
            expect("dfs", {{"n", n}, {"s", s}}, pas.sum(n, 0, s));

    for (long long n = 0; n <= 12; ++n)
        for (long long s = 1; s <= 6; ++s)
            for (long long alpha = 1; alpha <= 3; ++alpha) {
                long long D = oracle_D(s, alpha);
                expect("bfks", {{"n", n}, {"s", s}, {"alpha", alpha}}, pas.sum(n, 0, D), D);
            }

    const long long pps[] = {2, 3, 4, 5, 8, 9};
    for (long long q : pps) {
        for (long long n = 1; n <= 12; ++n)
            for (long long s = 1; s < q; ++s)
                expect("xy", {{"n", n}, {"s", s}, {"q", q}},
                       BigInt(q - s) * pas.sum(n - 1, 0, q - 1));
        for (long long n = 0; n <= 12; ++n) {
            expect("corollary", {{"n", n}, {"q", q}}, pas.sum(n, 0, q - 1));
            for (long long k : {2, 3, 7})
                expect("main3", {{"n", n}, {"q", q}, {"k", k}},
                       BigInt(k - 1) * pas.sum(n, 0, q - 1));
        }
    }

    for (long long q : {2, 3, 4, 9}) {
        PrimePower pp = PrimePower::from_q(q);
        for (long long n = 1; n <= 12; ++n)
            for (long long s = 1; s < q; ++s)
                expect("main2", {{"n", n}, {"s", s}, {"q", q}}, pas.sum(n - 1, 0, s));
        for (long long n = 0; n <= 10; ++n)
            for (long long k : {2, 3})
                for (long long t = 1; t <= q - 1; ++t) {
                    BigInt want = BigInt(k - 1) * pas.sum(n, q - t, q - 1);
                    expect("main4", {{"n", n}, {"q", q}, {"k", k}, {"t", t}}, want);
                    expect("conjecture", {{"n", n}, {"q", q}, {"k", k}, {"t", t}}, want);
                }
        // xy2 where the hypothesis holds; rejection where it fails
        for (long long b = 1; b < q; ++b)
            for (long long s = 1; s <= b; ++s)
                for (long long n : {1, 5, 9}) {
                    if (pas.c(b, s) % pp.p != 0) {
                        expect("xy2", {{"n", n}, {"s", s}, {"b", b}, {"q", q}},
                               pas.sum(n - 1, 0, s));
                    } else {
                        ++points;
                        try {
                            bound("xy2", {{"n", n}, {"s", s}, {"b", b}, {"q", q}});
                            out.fail("xy2 accepted p | C(b,s) at b=" + std::to_string(b) +
                                     " s=" + std::to_string(s) + " q=" + std::to_string(q));
                        } catch (const std::invalid_argument&) {
                        }
                    }
                }
    }

    for (long long n = 0; n <= 10; ++n)
        for (long long s = 1; s <= 5; ++s)
            for (long long alpha = 1; alpha <= 3; ++alpha)
                for (long long k : {2, 4}) {
                    long long D = oracle_D(s, alpha);
                    expect("main5", {{"n", n}, {"s", s}, {"alpha", alpha}, {"k", k}},
                           BigInt(k - 1) * pas.sum(n, 0, D), D);
                }

    for (long long q : {4, 5, 8, 9}) {
        PrimePower pp = PrimePower::from_q(q);
        for (long long s = 1; s < q; ++s) {
            long long D = oracle_D(s, pp.alpha);
            for (long long t = 1; t <= std::min<long long>(D, q - 1); ++t)
                for (long long n : {0, 4, 8, 12}) {
                    if (D <= q - 1) {
                        expect("main5_t",
                               {{"n", n}, {"s", s}, {"q", q}, {"k", 3}, {"t", t}},
                               BigInt(2) * pas.sum(n, D - t + 1, D), D);
                    } else {
                        ++points;
                        try {
                            bound("main5_t", {{"n", n}, {"s", s}, {"q", q}, {"k", 3}, {"t", t}});
                            out.fail("main5_t accepted D > q-1 at s=" + std::to_string(s) +
                                     " q=" + std::to_string(q));
                        } catch (const std::invalid_argument&) {
                        }
                    }
                }
        }
    }

    if (points < 1000)
        out.fail("grid too small: " + std::to_string(points) + " < 1000 points");
    std::ostringstream n;
    n << points << " grid points, " << seconds_since(start) << "s";
    out.note = n.str();
    return out;
}

// ---------------------------------------------------------------------------

struct Criterion {
    int id;
    const char* desc;
    Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "separating polynomial properties on every proper residue set", run_c1},
    {2, "binomial periodicity and divisibility lemmas", run_c2},
    {3, "multilinear composition against the univariate oracle on full cubes", run_c3},
    {4, "pairing certificate engine on random valid families", run_c4},
    {5, "exhaustive search never beats the k-wise bound", run_c5},
    {6, "oddtown anchor: max n against bound n+1", run_c6},
    {7, "size-window sweep and combined certificate ranks", run_c7},
    {8, "bounded separator search within the theorem's degree cap", run_c8},
    {9, "bound calculator against Pascal-triangle summation", run_c9},
};

} // namespace

int main(int argc, char** argv)
{
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) {
        try {
            wanted.insert(std::stoi(argv[i]));
        } catch (const std::exception&) {
            std::cerr << "usage: " << argv[0] << " [criterion numbers]\n";
            return 64;
        }
    }

    int failures = 0;
    for (const Criterion& c : kCriteria) {
        if (!wanted.empty() && !wanted.count(c.id))
            continue;
        Outcome out = c.run();
        std::cout << (out.ok ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.desc
                  << " (" << out.note << ")\n";
        for (const std::string& d : out.diagnostics)
            std::cout << "       " << d << "\n";
        if (!out.ok)
            ++failures;
        std::cout.flush();
    }
    return failures;
}
