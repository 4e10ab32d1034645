// affrank: exact bounded-rank matrix-space toolkit over small prime fields.
//
// Subcommands: models, rank, urk, invariants, congruent, search, flanders,
// rc-maps, generation, hyperplane-scan, verify. Every command is
// deterministic: identical inputs produce byte-identical output.
//
// Exit codes: 0 success, 1 check failure, 2 usage error, 3 capacity error.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "affrank/search.hpp"
#include "affrank/space_io.hpp"
#include "affrank/verify.hpp"

using namespace affrank;

namespace {

struct GlobalOpts {
    long long member_budget = kDefaultMemberBudget;
    long long group_budget = kDefaultGroupBudget;
    long long space_budget = kDefaultSpaceBudget;
    uint64_t seed = 0xA11E5;
    int threads = 0; // 0: take AFFRANK_THREADS, default 1
};

int resolve_threads(const GlobalOpts& g) {
    if (g.threads > 0) return g.threads;
    if (const char* env = std::getenv("AFFRANK_THREADS")) {
        int t = std::atoi(env);
        if (t >= 1 && t <= 256) return t;
    }
    return 1;
}

AmbientKind parse_ambient(const std::string& name, int n, int p) {
    if (name == "sym" || name == "symmetric") return AmbientKind::symmetric(n);
    if (name == "alt" || name == "alternating") return AmbientKind::alternating(n);
    if (name == "full") return AmbientKind::full(n, p > 0 ? p : n);
    throw usage_error("unknown ambient: " + name);
}

Matrix read_matrix_file(const std::string& path, FieldSpec f) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open matrix file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    nlohmann::json grid;
    try {
        grid = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw usage_error(std::string("matrix file: invalid grid: ") + e.what());
    }
    return detail::matrix_from_json(grid, f, "matrix");
}

ModelName parse_model_tag(const std::string& tag, int r) {
    if (tag == "sym-pad") return {ModelTag::sym_pad, r};
    if (tag == "alt-pad") return {ModelTag::alt_pad, r};
    if (tag == "wa") return {ModelTag::wa, r};
    if (tag == "ws") return {ModelTag::ws, r};
    if (tag == "z") return {ModelTag::z, r + 1}; // parameterized by upper rank
    if (tag == "zprime") return {ModelTag::zprime, r};
    if (tag == "y1") return {ModelTag::y1, 0};
    if (tag == "y2") return {ModelTag::y2, 0};
    if (tag == "y3") return {ModelTag::y3, 0};
    if (tag == "u") return {ModelTag::u, 0};
    throw usage_error("unknown model tag: " + tag + " (see `models list`)");
}

void print_profile(std::ostream& out, const InvariantProfile& p) {
    out << "dim = " << p.dim << '\n';
    out << "is_linear = " << (p.is_linear ? "true" : "false") << '\n';
    out << "contains_zero = " << (p.contains_zero ? "true" : "false") << '\n';
    for (const auto& [r, c] : p.rank_distribution) out << "rank[" << r << "] = " << c << '\n';
    out << "alternating_count = " << p.alternating_count << '\n';
    out << "common_kernel_dim = " << p.common_kernel_dim << '\n';
    out << "left_kernel_dim = " << p.left_kernel_dim << '\n';
}

std::string search_report_text(const SearchReport& rep) {
    std::ostringstream out;
    out << "ambient = " << rep.ambient.name() << '\n';
    out << "n = " << rep.n << '\n';
    if (rep.ambient.kind() == Ambient::full) out << "p = " << rep.p << '\n';
    out << "q = " << rep.field.q << '\n';
    out << "r = " << rep.r << '\n';
    out << "dim = " << rep.dim << '\n';
    out << "spaces_scanned = " << rep.spaces_scanned << '\n';
    out << "spaces_satisfying = " << rep.spaces_satisfying << '\n';
    out << "max_dim_found = " << rep.max_dim_found << '\n';
    out << "classes = " << rep.classes.size() << '\n';
    for (size_t i = 0; i < rep.classes.size(); ++i) {
        const auto& cls = rep.classes[i];
        out << "class " << i + 1 << ": survivors = " << cls.survivor_count << ", models =";
        if (cls.matched_models.empty()) out << " (none)";
        for (const auto& m : cls.matched_models) out << ' ' << model_name_string(m);
        out << '\n' << write_space_text(cls.representative);
    }
    return out.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact linear algebra over GF(q): bounded-rank affine matrix spaces"};
    app.require_subcommand(1);
    // global budget flags may appear after the subcommand too
    GlobalOpts g;
    app.add_option("--member-budget", g.member_budget, "max members enumerated per space");
    app.add_option("--group-budget", g.group_budget, "max congruence group order");
    app.add_option("--space-budget", g.space_budget, "max affine subspaces scanned");
    app.add_option("--seed", g.seed, "seed for the randomized suites");
    app.add_option("--threads", g.threads, "verify worker threads (or AFFRANK_THREADS)");

    // models
    auto* models = app.add_subcommand("models", "build catalog spaces");
    auto* models_list = models->add_subcommand("list", "print the catalog");
    auto* models_build = models->add_subcommand("build", "construct a named space");
    std::string build_tag, build_out;
    int build_n = 0, build_r = 0;
    unsigned build_q = 2;
    models_build->add_option("tag", build_tag, "model tag")->required();
    models_build->add_option("--n", build_n, "ambient size")->required();
    models_build->add_option("--r", build_r, "upper rank parameter");
    models_build->add_option("--q", build_q, "field size")->required();
    models_build->add_option("-o,--out", build_out, "output space file")->required();

    // rank
    auto* rank_cmd = app.add_subcommand("rank", "rank of a matrix grid file");
    std::string rank_file;
    unsigned rank_q = 2;
    rank_cmd->add_option("file", rank_file, "matrix grid, e.g. [[0,1],[1,1]]")->required();
    rank_cmd->add_option("--q", rank_q, "field size")->required();

    // urk
    auto* urk_cmd = app.add_subcommand("urk", "upper rank of a space file");
    std::string urk_file;
    urk_cmd->add_option("file", urk_file)->required();

    // invariants
    auto* inv_cmd = app.add_subcommand("invariants", "congruence-invariant profile");
    std::string inv_file;
    inv_cmd->add_option("file", inv_file)->required();

    // congruent
    auto* cong_cmd = app.add_subcommand("congruent", "exact congruence test of two spaces");
    std::string cong_a, cong_b;
    cong_cmd->add_option("A", cong_a)->required();
    cong_cmd->add_option("B", cong_b)->required();

    // search
    auto* search_cmd = app.add_subcommand("search", "bounded-rank affine subspace scan");
    std::string search_ambient = "sym", search_out;
    int search_n = 0, search_p = 0, search_r = 0, search_dim = 0;
    unsigned search_q = 2;
    bool search_classify = false;
    search_cmd->add_option("--ambient", search_ambient, "sym|alt|full")->required();
    search_cmd->add_option("--n", search_n)->required();
    search_cmd->add_option("--p", search_p, "columns (full ambient)");
    search_cmd->add_option("--r", search_r, "rank bound")->required();
    search_cmd->add_option("--q", search_q)->required();
    search_cmd->add_option("--dim", search_dim)->required();
    search_cmd->add_flag("--classify", search_classify, "deduplicate up to congruence");
    search_cmd->add_option("--out", search_out, "write the report to a file");

    // flanders
    auto* fl_cmd = app.add_subcommand("flanders", "rectangular bounded-rank scan");
    int fl_n = 0, fl_p = 0, fl_r = 0, fl_dim = 0;
    unsigned fl_q = 2;
    fl_cmd->add_option("--n", fl_n)->required();
    fl_cmd->add_option("--p", fl_p)->required();
    fl_cmd->add_option("--r", fl_r)->required();
    fl_cmd->add_option("--q", fl_q)->required();
    fl_cmd->add_option("--dim", fl_dim)->required();

    // rc-maps
    auto* rc_cmd = app.add_subcommand("rc-maps", "range-compatible linear map census");
    std::string rc_ambient = "sym";
    int rc_p = 0;
    unsigned rc_q = 2;
    rc_cmd->add_option("--ambient", rc_ambient, "sym|alt")->required();
    rc_cmd->add_option("--p", rc_p)->required();
    rc_cmd->add_option("--q", rc_q)->required();

    // generation
    auto* gen_cmd = app.add_subcommand("generation", "generation by high-rank members");
    std::string gen_file;
    int gen_r = 0;
    gen_cmd->add_option("file", gen_file)->required();
    gen_cmd->add_option("--r", gen_r, "rank threshold")->required();

    // hyperplane-scan
    auto* hs_cmd = app.add_subcommand("hyperplane-scan",
                                      "minimum totally singular restriction dimension");
    std::string hs_file;
    hs_cmd->add_option("file", hs_file)->required();

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance checks");
    std::string verify_suite = "all";
    verify_cmd->add_option("suite", verify_suite, "models|lemmas|theorems|all");

    // global budget flags are accepted after the subcommand as well
    auto everything = [](const CLI::App*) { return true; };
    for (CLI::App* sc : app.get_subcommands(everything)) {
        sc->fallthrough();
        for (CLI::App* sub : sc->get_subcommands(everything)) sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (*models_list) {
            std::cout << "sym-pad  --r R (0 <= R <= n)          symmetric block pad, upper rank R\n"
                         "alt-pad  --r R (R even, R+1 <= n)     alternating block pad, upper rank R\n"
                         "wa       --r R (R even, R < n)        alternating two-block family\n"
                         "ws       --r R (R even <= n, odd < n) symmetric two-block family\n"
                         "z        --r R (q = 2, R < n)         bordered-diagonal family, upper rank R\n"
                         "zprime   --r R (q = 2, R odd < n)     symmetric family with a 2x2 line block\n"
                         "y1 y2 y3 (n = 3, q = 2)               singular affine families, dim 3\n"
                         "u        (n = 4, q = 2)               exceptional alternating family, dim 3\n";
            return 0;
        }
        if (*models_build) {
            ModelName name = parse_model_tag(build_tag, build_r);
            auto sp = build_model(name, build_n, FieldSpec(build_q));
            write_space_file(build_out, sp);
            std::cout << "wrote " << build_out << " (dim " << sp.dim() << ")\n";
            return 0;
        }
        if (*rank_cmd) {
            Matrix m = read_matrix_file(rank_file, FieldSpec(rank_q));
            std::cout << rank(m) << '\n';
            return 0;
        }
        if (*urk_cmd) {
            auto sp = read_space_file(urk_file);
            std::cout << upper_rank(sp, g.member_budget) << '\n';
            return 0;
        }
        if (*inv_cmd) {
            auto sp = read_space_file(inv_file);
            print_profile(std::cout, invariant_profile(sp, g.member_budget));
            return 0;
        }
        if (*cong_cmd) {
            auto a = read_space_file(cong_a);
            auto b = read_space_file(cong_b);
            auto res = are_congruent(a, b, g.member_budget, g.group_budget);
            if (res.congruent) {
                std::cout << "congruent\nP = " << res.witness->to_text() << '\n';
                return 0;
            }
            std::cout << "not congruent: " << res.first_difference << '\n';
            return 1;
        }
        if (*search_cmd) {
            AmbientKind amb = parse_ambient(search_ambient, search_n, search_p);
            auto rep = bounded_rank_search(amb, search_r, FieldSpec(search_q), search_dim,
                                           search_classify, g.space_budget, g.member_budget,
                                           g.group_budget);
            std::string text = search_report_text(rep);
            if (!search_out.empty()) {
                std::ofstream out(search_out, std::ios::binary);
                if (!out) throw usage_error("cannot write report: " + search_out);
                out << text;
            }
            std::cout << text;
            return 0;
        }
        if (*fl_cmd) {
            auto rep = flanders_scan(fl_n, fl_p, fl_r, FieldSpec(fl_q), fl_dim, g.space_budget);
            std::cout << "spaces_scanned = " << rep.core.spaces_scanned << '\n'
                      << "spaces_satisfying = " << rep.core.spaces_satisfying << '\n'
                      << "with_common_kernel = " << rep.with_common_kernel << '\n'
                      << "with_common_range = " << rep.with_common_range << '\n'
                      << "exceptional_zero_free = " << rep.exceptional_zero_free << '\n'
                      << "unexplained = " << rep.unexplained << '\n';
            return 0;
        }
        if (*rc_cmd) {
            Ambient amb = rc_ambient == "alt" || rc_ambient == "alternating"
                              ? Ambient::alternating
                              : Ambient::symmetric;
            auto rc = enumerate_rc_maps(amb, rc_p, FieldSpec(rc_q), g.member_budget);
            std::cout << "maps_tested = " << rc.maps_tested << '\n'
                      << "range_compatible = " << rc.rc_maps.size() << '\n'
                      << "local = " << rc.local_count << '\n'
                      << "local_plus_delta = " << rc.local_plus_delta_count << '\n'
                      << "other = " << rc.other_count << '\n';
            for (const auto& m : rc.rc_maps) {
                std::cout << rc_label_string(m.label);
                if (m.witness) {
                    std::cout << " x = [";
                    for (size_t i = 0; i < m.witness->size(); ++i)
                        std::cout << (i ? "," : "") << int((*m.witness)[i]);
                    std::cout << ']';
                }
                std::cout << '\n';
            }
            return 0;
        }
        if (*gen_cmd) {
            auto sp = read_space_file(gen_file);
            bool ok = generation_check(sp, gen_r, g.member_budget);
            std::cout << (ok ? "generated" : "not generated") << '\n';
            return ok ? 0 : 1;
        }
        if (*hs_cmd) {
            auto sp = read_space_file(hs_file);
            auto scan = hyperplane_scan(sp, g.space_budget);
            std::cout << "min_dim = " << scan.min_dim << "\nwitness_normal = [";
            for (size_t i = 0; i < scan.witness.normal.size(); ++i)
                std::cout << (i ? "," : "") << int(scan.witness.normal[i]);
            std::cout << "]\n";
            return 0;
        }
        if (*verify_cmd) {
            if (verify_suite != "all" && verify_suite != "models" && verify_suite != "lemmas" &&
                verify_suite != "theorems")
                throw usage_error("verify: unknown suite " + verify_suite);
            verify::Config cfg{g.member_budget, g.group_budget, g.space_budget, g.seed,
                               resolve_threads(g)};
            auto results = verify::run_suite(verify_suite, cfg);
            std::cout << verify::format_report(results);
            if (!verify::all_pass(results)) {
                for (const auto& r : results)
                    if (!r.pass) {
                        std::cout << "first failing check: " << r.id << '\n';
                        break;
                    }
                return 1;
            }
            std::cout << "ok\n";
            return 0;
        }
    } catch (const capacity_error& e) {
        std::cerr << "capacity error: " << e.what() << '\n';
        return 3;
    } catch (const arithmetic_error& e) {
        std::cerr << "arithmetic error: " << e.what() << '\n';
        return 2;
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
