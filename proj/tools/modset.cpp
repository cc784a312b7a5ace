#include <modset/modset.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr const char* kVersion = "1.0.0";

std::string timestamp_utc()
{
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

void emit_header(bool plain, const std::string& what)
{
    if (!plain)
        std::cout << "# modset " << kVersion << " " << what << " " << timestamp_utc() << "\n";
}

long long env_node_budget(long long fallback)
{
    const char* v = std::getenv("MODSET_NODE_BUDGET");
    if (!v || !*v)
        return fallback;
    try {
        long long b = std::stoll(v);
        if (b < 1)
            throw std::invalid_argument("MODSET_NODE_BUDGET must be positive");
        return b;
    } catch (const std::exception&) {
        throw std::invalid_argument("MODSET_NODE_BUDGET is not a valid positive integer");
    }
}

std::string witness_line(const modset::SetSystem& w)
{
    std::string out;
    for (std::size_t i = 0; i < w.sets.size(); ++i) {
        if (i)
            out += " ";
        out += modset::render_set(w.sets[i]);
    }
    return out.empty() ? "(empty)" : out;
}

struct BoundArgs {
    std::string name;
    std::map<std::string, long long> params;
};

int run_bound(const BoundArgs& args, bool plain)
{
    modset::BoundResult r = modset::bound(args.name, args.params);
    emit_header(plain, "bound " + args.name);
    if (r.D)
        std::cout << "D=" << *r.D << " bound=" << r.value << "\n";
    else
        std::cout << r.value << "\n";
    return 0;
}

int run_check(const std::string& path, bool avoiding, bool kwise, bool differencing, bool plain)
{
    modset::FamilyFile f = modset::load_family_file(path);
    if (!avoiding && !kwise && !differencing) { // default: the two k-wise hypotheses
        avoiding = true;
        kwise = true;
    }
    emit_header(plain, "check " + path);
    bool ok = true;
    auto report = [&](const char* name, const modset::PredicateReport& r) {
        if (r.ok) {
            std::cout << "PASS " << name << "\n";
        } else {
            std::cout << "FAIL " << name << ": " << r.detail << "\n";
            ok = false;
        }
    };
    if (avoiding)
        report("avoiding", modset::is_L_avoiding(f.family, f.ctx));
    if (kwise)
        report("kwise", modset::is_kwise_L_intersecting(f.family, f.ctx));
    if (differencing)
        report("differencing", modset::is_differencing_sperner(f.family, f.ctx));
    if (f.ctx.t) {
        long long q = f.ctx.pp.q, t = *f.ctx.t;
        modset::PredicateReport r;
        for (std::size_t i = 0; i < f.family.sets.size() && r.ok; ++i) {
            long long res = modset::mod_euclid(std::popcount(f.family.sets[i]), q);
            if (res < q - t) {
                r.ok = false;
                r.detail = "set #" + std::to_string(i + 1) + " " +
                           modset::render_set(f.family.sets[i]) + " has size residue " +
                           std::to_string(res) + " below q-t";
            }
        }
        report("size-window", r);
    }
    std::cout << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 2;
}

int run_certify(const std::string& path, const std::string& out_path, bool plain)
{
    modset::FamilyFile f = modset::load_family_file(path);
    modset::PairingCertificate cert = modset::greedy_pairing(f.family, f.ctx);
    std::vector<modset::MLPoly> G = modset::build_Gi(cert, f.ctx, f.family.n);
    std::vector<std::uint64_t> xs;
    xs.reserve(cert.rounds.size());
    for (const auto& r : cert.rounds)
        xs.push_back(r.X);
    modset::RankReport tri = modset::triangular_check(G, xs);
    nlohmann::ordered_json doc = modset::certificate_to_json(f, cert, G, tri);
    if (f.ctx.t) {
        modset::Main4Report rep = modset::main4_certificate(f.family, f.ctx);
        doc["combined"] = modset::main4_report_to_json(rep, f.ctx);
    }
    emit_header(plain, "certify " + path);
    if (out_path.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out)
            throw std::runtime_error("cannot write " + out_path);
        out << doc.dump(2) << "\n";
        std::cout << "wrote " << out_path << "\n";
    }
    std::cout << "verdict: " << doc["verdict"].get<std::string>() << "\n";
    return doc["verdict"] == "failed" ? 1 : 0;
}

struct SeparatorArgs {
    long long q = 0;
    std::vector<int> L;
    std::optional<int> nu;
    std::vector<long long> search; // d_max coeff_bound
    long long window = 0;
};

int run_separator(const SeparatorArgs& args, bool plain)
{
    modset::PrimePower pp = modset::PrimePower::from_q(args.q);
    emit_header(plain, "separator q=" + std::to_string(args.q));
    if (!args.search.empty()) {
        if (args.search.size() != 2)
            throw std::invalid_argument("--search needs exactly: d_max coeff_bound");
        int nu = -1;
        if (args.nu) {
            nu = *args.nu;
        } else {
            for (int r = 0; r < pp.q && nu < 0; ++r)
                if (std::find(args.L.begin(), args.L.end(), r) == args.L.end())
                    nu = r;
            if (nu < 0)
                throw std::invalid_argument("L covers every residue");
        }
        auto found =
            modset::search_min_separator(nu, args.L, pp, args.search[0], args.search[1]);
        modset::BigInt D = modset::separator_degree_cap(static_cast<long long>(args.L.size()),
                                                        pp.alpha);
        if (!found) {
            std::cout << "no separator of degree <= " << args.search[0] << " with |coeff| <= "
                      << args.search[1] << " (inconclusive)\n";
            std::cout << "degree cap D = " << D << "\n";
            return 0;
        }
        std::cout << "separator = " << modset::render_intpoly(found->poly) << "\n";
        std::cout << "degree = " << found->degree << "\n";
        std::cout << "degree cap D = " << D
                  << (found->degree <= D ? " (within cap)" : " (above cap)") << "\n";
        std::cout << "separated = " << (found->report.separated ? "true" : "false")
                  << (found->report.exact ? " (exact)" : " (window check)") << "\n";
        return 0;
    }
    modset::IntPoly fl = modset::build_FL(args.L, pp);
    std::vector<int> outside;
    for (int r = 0; r < pp.q; ++r)
        if (std::find(args.L.begin(), args.L.end(), r) == args.L.end())
            outside.push_back(r);
    std::vector<int> A = args.nu ? std::vector<int>{*args.nu} : outside;
    modset::SeparationReport rep =
        modset::verify_separator(fl, A, args.L, pp, args.window);
    std::cout << "F_L = " << modset::render_intpoly(fl) << "\n";
    std::cout << "degree = " << fl.degree() << "\n";
    std::cout << "separated = " << (rep.separated ? "true" : "false")
              << (rep.exact ? " (exact)" : " (window check)") << "\n";
    std::cout << "max val outside = " << rep.max_val_outside.str()
              << ", min val inside = " << rep.min_val_inside.str() << "\n";
    return rep.separated ? 0 : 1;
}

struct SearchArgs {
    long long n = 0;
    long long q = 0;
    std::vector<int> L;
    long long k = 2;
    std::optional<long long> t;
    std::string mode = "pairwise";
    long long budget = 0;
    std::optional<long long> empirical_s;
    std::vector<int> residues;
};

int run_search(const SearchArgs& args, bool plain)
{
    modset::PrimePower pp = modset::PrimePower::from_q(args.q);
    modset::SearchOptions opts;
    opts.node_budget = args.budget > 0 ? args.budget : env_node_budget(opts.node_budget);
    emit_header(plain, "search");

    if (args.empirical_s) {
        modset::EmpiricalM m = modset::empirical_m(static_cast<int>(args.n), *args.empirical_s,
                                                   pp, opts);
        std::cout << "m(" << args.n << "," << *args.empirical_s << "," << args.q
                  << ") = " << m.value << "\n";
        std::cout << "exhaustive = " << (m.exhaustive ? "true" : "false") << "\n";
        std::cout << "nodes = " << m.nodes << "\n";
        return 0;
    }
    if (!args.residues.empty()) {
        modset::ConjectureReport rep = modset::conjecture_probe(
            static_cast<int>(args.n), pp, args.k, args.residues, args.L, opts);
        std::cout << "max_size = " << rep.search.max_size << "\n";
        std::cout << "bound = " << rep.bound << "\n";
        std::cout << "exhaustive = " << (rep.search.exhaustive ? "true" : "false") << "\n";
        std::cout << "nodes = " << rep.search.nodes << "\n";
        std::cout << "witness = " << witness_line(rep.search.witness) << "\n";
        std::cout << (rep.consistent ? "CONSISTENT" : "VIOLATION") << "\n";
        return rep.consistent ? 0 : 1;
    }
    modset::SearchMode mode = modset::parse_mode(args.mode);
    modset::ModContext ctx(pp, args.L, args.k, args.t);
    modset::SearchResult r = modset::max_family(static_cast<int>(args.n), ctx, mode, opts);
    std::cout << "max_size = " << r.max_size << "\n";
    std::cout << "exhaustive = " << (r.exhaustive ? "true" : "false") << "\n";
    std::cout << "nodes = " << r.nodes << "\n";
    std::cout << "witness = " << witness_line(r.witness) << "\n";
    return 0;
}

struct SweepArgs {
    std::vector<long long> qs;
    long long n_min = 1;
    long long n_max = 0;
    std::vector<long long> ks = {2};
    std::vector<std::string> modes = {"pairwise"};
    long long budget = 0;
    std::string out_path;
};

int run_sweep(const SweepArgs& args, bool plain)
{
    modset::SweepSpec spec;
    spec.qs = args.qs;
    spec.n_min = args.n_min;
    spec.n_max = args.n_max;
    spec.ks = args.ks;
    spec.modes.clear();
    for (const std::string& m : args.modes)
        spec.modes.push_back(modset::parse_mode(m));
    spec.opts.node_budget =
        args.budget > 0 ? args.budget : env_node_budget(spec.opts.node_budget);

    std::vector<modset::SweepRow> rows = modset::run_sweep(spec);
    emit_header(plain, "sweep");
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!args.out_path.empty()) {
        file.open(args.out_path);
        if (!file)
            throw std::runtime_error("cannot write " + args.out_path);
        out = &file;
    }
    *out << modset::sweep_csv_header() << "\n";
    long long violations = 0, non_exhaustive = 0;
    for (const auto& row : rows) {
        *out << modset::render_sweep_row(row) << "\n";
        if (row.violated) {
            ++violations;
            std::cerr << "BOUND VIOLATED: " << modset::render_sweep_row(row) << "\n";
        }
        if (!row.exhaustive)
            ++non_exhaustive;
    }
    if (!args.out_path.empty())
        std::cout << "wrote " << args.out_path << " (" << rows.size() << " rows)\n";
    if (non_exhaustive)
        std::cerr << "note: " << non_exhaustive << " rows hit the node budget\n";
    return violations ? 1 : 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"set-system bounds, certificates and searches for modular "
                 "intersection conditions"};
    app.require_subcommand(1);
    bool plain = false;
    app.add_flag("--plain", plain, "suppress the timestamped header line");

    // bound
    BoundArgs bound_args;
    auto* bound_cmd = app.add_subcommand(
        "bound", "evaluate a theorem bound exactly (dfs, bfks, xy, xy2, main2, main3, main4, "
                 "corollary, main5, main5_t, conjecture)");
    bound_cmd->add_option("name", bound_args.name, "bound id")->required();
    std::map<std::string, std::optional<long long>> bound_opts;
    for (const char* key : {"n", "s", "q", "p", "alpha", "k", "t", "b"})
        bound_cmd->add_option("--" + std::string(key), bound_opts[key]);

    // check
    std::string check_path;
    bool check_avoid = false, check_kwise = false, check_diff = false;
    auto* check_cmd =
        app.add_subcommand("check", "verify family predicates against a family file");
    check_cmd->add_option("file", check_path, "family JSON file")->required();
    check_cmd->add_flag("--avoiding", check_avoid, "check |E| mod q outside L");
    check_cmd->add_flag("--kwise", check_kwise, "check k-wise intersections inside L");
    check_cmd->add_flag("--differencing", check_diff, "check |E \\ F| inside L");

    // certify
    std::string certify_path, certify_out;
    auto* certify_cmd = app.add_subcommand(
        "certify", "emit the pairing certificate, G_i polynomials and rank reports");
    certify_cmd->add_option("file", certify_path, "family JSON file")->required();
    certify_cmd->add_option("--out", certify_out, "write the JSON document here");

    // separator
    SeparatorArgs sep_args;
    std::vector<long long> sep_search;
    std::optional<int> sep_nu;
    auto* sep_cmd = app.add_subcommand(
        "separator", "build the canonical separating polynomial, or search for a minimal one");
    sep_cmd->add_option("--q", sep_args.q, "prime-power modulus")->required();
    sep_cmd->add_option("--L", sep_args.L, "residues to separate away from")
        ->required()
        ->delimiter(',');
    sep_cmd->add_option("--nu", sep_nu, "single residue on the outside (default: all outside)");
    sep_cmd->add_option("--search", sep_search,
                        "d_max coeff_bound: search the minimal-degree separator")
        ->expected(2);
    sep_cmd->add_option("--window", sep_args.window,
                        "verification window half-width (default 4*q^2)");

    // search
    SearchArgs search_args;
    std::optional<long long> search_t, search_emp;
    auto* search_cmd =
        app.add_subcommand("search", "exhaustive max-family search / empirical m / probes");
    search_cmd->add_option("--n", search_args.n, "ground-set size")->required();
    search_cmd->add_option("--q", search_args.q, "prime-power modulus")->required();
    search_cmd->add_option("--L", search_args.L, "residue set L")->delimiter(',');
    search_cmd->add_option("--k", search_args.k, "intersection arity (default 2)");
    search_cmd->add_option("--t", search_t, "size-window width for main4 mode");
    search_cmd->add_option("--mode", search_args.mode,
                           "pairwise | kwise | differencing | main2 | main4");
    search_cmd->add_option("--budget", search_args.budget, "node budget override");
    search_cmd->add_option("--empirical-s", search_emp,
                           "compute m(n,s,q): max over all L of size s");
    search_cmd->add_option("--residues", search_args.residues,
                           "probe the windowed conjecture with these size residues")
        ->delimiter(',');

    // sweep
    SweepArgs sweep_args;
    auto* sweep_cmd =
        app.add_subcommand("sweep", "grid of searches, each checked against its theorem bound");
    sweep_cmd->add_option("--q", sweep_args.qs, "prime-power moduli")->required()->delimiter(',');
    sweep_cmd->add_option("--n-max", sweep_args.n_max, "largest ground-set size")->required();
    sweep_cmd->add_option("--n-min", sweep_args.n_min, "smallest ground-set size (default 1)");
    sweep_cmd->add_option("--k", sweep_args.ks, "intersection arities")->delimiter(',');
    sweep_cmd->add_option("--modes", sweep_args.modes,
                          "modes to sweep (default pairwise)")
        ->delimiter(',');
    sweep_cmd->add_option("--budget", sweep_args.budget, "node budget override");
    sweep_cmd->add_option("--out", sweep_args.out_path, "write CSV here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help and friends
        app.exit(e);
        return 2;
    }

    try {
        if (bound_cmd->parsed()) {
            for (const auto& [key, val] : bound_opts)
                if (val)
                    bound_args.params[key] = *val;
            return run_bound(bound_args, plain);
        }
        if (check_cmd->parsed())
            return run_check(check_path, check_avoid, check_kwise, check_diff, plain);
        if (certify_cmd->parsed())
            return run_certify(certify_path, certify_out, plain);
        if (sep_cmd->parsed()) {
            sep_args.nu = sep_nu;
            sep_args.search.assign(sep_search.begin(), sep_search.end());
            return run_separator(sep_args, plain);
        }
        if (search_cmd->parsed()) {
            search_args.t = search_t;
            search_args.empirical_s = search_emp;
            return run_search(search_args, plain);
        }
        if (sweep_cmd->parsed())
            return run_sweep(sweep_args, plain);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const modset::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
