#ifndef MODSET_IO_HPP
#define MODSET_IO_HPP

#include <modset/certificates.hpp>
#include <modset/families.hpp>

#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace modset {

/// Structural problem with an input document (bad JSON, missing or mistyped
/// keys, duplicate sets, out-of-range elements). Distinct from
/// std::invalid_argument, which signals a violated mathematical hypothesis.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

struct FamilyFile {
    SetSystem family;
    ModContext ctx;

    FamilyFile(SetSystem f, ModContext c) : family(std::move(f)), ctx(std::move(c)) {}
};

namespace detail {

inline const nlohmann::json& field(const nlohmann::json& j, const char* key,
                                   const std::string& origin)
{
    auto it = j.find(key);
    if (it == j.end())
        throw ParseError(origin + ": missing key \"" + key + "\"");
    return *it;
}

inline long long int_field(const nlohmann::json& j, const char* key, const std::string& origin)
{
    const nlohmann::json& v = field(j, key, origin);
    if (!v.is_number_integer())
        throw ParseError(origin + ": key \"" + key + "\" must be an integer");
    return v.get<long long>();
}

} // namespace detail

/// Family document: {"n", "q", "p", "alpha", "L", "k", "t", "sets"}; sets
/// hold 1-based elements. p/alpha/t are optional ("t" may be null); when
/// present they must agree with q.
inline FamilyFile load_family(std::istream& in, const std::string& origin = "family")
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
    if (!doc.is_object())
        throw ParseError(origin + ": top level must be an object");

    long long n = detail::int_field(doc, "n", origin);
    long long q = detail::int_field(doc, "q", origin);
    long long k = detail::int_field(doc, "k", origin);

    const nlohmann::json& lj = detail::field(doc, "L", origin);
    if (!lj.is_array())
        throw ParseError(origin + ": \"L\" must be an array of integers");
    std::vector<int> L;
    for (const auto& v : lj) {
        if (!v.is_number_integer())
            throw ParseError(origin + ": \"L\" must be an array of integers");
        int r = v.get<int>();
        for (int seen : L)
            if (seen == r)
                throw ParseError(origin + ": repeated residue " + std::to_string(r) +
                                 " in \"L\"");
        L.push_back(r);
    }

    std::optional<long long> t;
    if (auto it = doc.find("t"); it != doc.end() && !it->is_null()) {
        if (!it->is_number_integer())
            throw ParseError(origin + ": \"t\" must be an integer or null");
        t = it->get<long long>();
    }

    const nlohmann::json& sj = detail::field(doc, "sets", origin);
    if (!sj.is_array())
        throw ParseError(origin + ": \"sets\" must be an array of element lists");
    std::vector<std::vector<int>> lists;
    for (const auto& sv : sj) {
        if (!sv.is_array())
            throw ParseError(origin + ": each set must be an array of 1-based elements");
        std::vector<int> lst;
        for (const auto& ev : sv) {
            if (!ev.is_number_integer())
                throw ParseError(origin + ": set elements must be integers");
            lst.push_back(ev.get<int>());
        }
        lists.push_back(std::move(lst));
    }

    if (n < 0 || n > 63)
        throw ParseError(origin + ": n must lie in [0, 63]");
    SetSystem family = [&] {
        try {
            return SetSystem(static_cast<int>(n), lists);
        } catch (const std::invalid_argument& e) {
            // duplicate sets / out-of-range elements are document defects
            throw ParseError(origin + ": " + e.what());
        }
    }();

    PrimePower pp = PrimePower::from_q(q); // q not a prime power -> hypothesis error
    if (auto it = doc.find("p"); it != doc.end() && !it->is_null()) {
        if (!it->is_number_integer() || it->get<long long>() != pp.p)
            throw ParseError(origin + ": \"p\" disagrees with q = " + std::to_string(q));
    }
    if (auto it = doc.find("alpha"); it != doc.end() && !it->is_null()) {
        if (!it->is_number_integer() || it->get<long long>() != pp.alpha)
            throw ParseError(origin + ": \"alpha\" disagrees with q = " + std::to_string(q));
    }

    return FamilyFile(std::move(family), ModContext(pp, L, k, t));
}

inline FamilyFile load_family_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError(path + ": cannot open file");
    return load_family(in, path);
}

inline nlohmann::ordered_json family_to_json(const FamilyFile& f)
{
    nlohmann::ordered_json doc;
    doc["n"] = f.family.n;
    doc["q"] = f.ctx.pp.q;
    doc["p"] = f.ctx.pp.p;
    doc["alpha"] = f.ctx.pp.alpha;
    doc["L"] = f.ctx.L;
    doc["k"] = f.ctx.k;
    if (f.ctx.t)
        doc["t"] = *f.ctx.t;
    else
        doc["t"] = nullptr;
    nlohmann::ordered_json sets = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < f.family.size(); ++i)
        sets.push_back(f.family.elements(i));
    doc["sets"] = sets;
    return doc;
}

namespace detail {

inline std::vector<int> mask_elements(std::uint64_t mask)
{
    std::vector<int> out;
    for (int j = 0; j < 64; ++j)
        if (mask >> j & 1)
            out.push_back(j + 1);
    return out;
}

} // namespace detail

/// Certificate document: rounds with X/Y/batch, the rendered G_i, the
/// triangular-criterion report, and the implied inequality chain
/// |F| <= (k-1)*m <= (k-1) * sum_{j<=q-1} C(n,j).
inline nlohmann::ordered_json certificate_to_json(const FamilyFile& f,
                                                  const PairingCertificate& cert,
                                                  const std::vector<MLPoly>& G,
                                                  const RankReport& tri)
{
    nlohmann::ordered_json doc;
    doc["family"] = family_to_json(f);
    doc["m"] = cert.m();
    nlohmann::ordered_json rounds = nlohmann::ordered_json::array();
    for (const PairingRound& r : cert.rounds) {
        nlohmann::ordered_json rj;
        nlohmann::ordered_json batch = nlohmann::ordered_json::array();
        for (std::size_t idx : r.batch)
            batch.push_back(idx + 1);
        rj["batch"] = batch;
        rj["X"] = detail::mask_elements(r.X);
        rj["Y"] = detail::mask_elements(r.Y);
        rounds.push_back(rj);
    }
    doc["rounds"] = rounds;
    nlohmann::ordered_json gs = nlohmann::ordered_json::array();
    for (const MLPoly& g : G)
        gs.push_back(render_mlpoly(g));
    doc["G"] = gs;
    doc["triangular"] = {{"count", tri.count},
                         {"rank", tri.rank},
                         {"full_rank", tri.full_rank},
                         {"triangular_ok", tri.triangular_ok}};

    BigInt dim = bound_corollary(f.family.n, f.ctx.pp.q).value;
    BigInt pair_cap = BigInt(f.ctx.k - 1) * BigInt(cert.m());
    BigInt main3 = bound_main3(f.family.n, f.ctx.pp.q, f.ctx.k).value;
    bool ok = BigInt(f.family.size()) <= pair_cap && BigInt(cert.m()) <= dim &&
              tri.triangular_ok;
    doc["chain"] = {{"family_size", f.family.size()},
                    {"pairs_cap", pair_cap.str()},
                    {"dimension", dim.str()},
                    {"main3_bound", main3.str()},
                    {"ok", ok}};
    doc["verdict"] = ok ? "ok" : "failed";
    return doc;
}

/// Combined-rank appendix for families carrying the size-residue window.
inline nlohmann::ordered_json main4_report_to_json(const Main4Report& rep, const ModContext& ctx)
{
    nlohmann::ordered_json doc;
    doc["m"] = rep.m;
    doc["h_count"] = rep.h_count;
    doc["dimension"] = rep.dim;
    doc["combined_rank"] = rep.combined_rank;
    doc["combined_full"] = rep.combined_full;
    doc["h_rank"] = rep.h_rank;
    doc["h_full"] = rep.h_full;
    nlohmann::ordered_json hs = nlohmann::ordered_json::array();
    for (const auto& [mask, poly] : rep.h) {
        nlohmann::ordered_json hj;
        hj["I"] = detail::mask_elements(mask);
        hj["h"] = render_mlpoly(poly);
        hs.push_back(hj);
    }
    doc["h_family"] = hs;
    doc["alpha"] = ctx.pp.alpha;
    // For prime modulus the combined matrix must have full rank; for proper
    // prime powers the h family itself can degenerate, so the rank is
    // reported without a verdict.
    if (ctx.pp.alpha == 1)
        doc["verdict"] = rep.combined_full ? "ok" : "failed";
    else
        doc["verdict"] = "informational";
    return doc;
}

} // namespace modset

#endif
