// pi: command-line front end for the workbench. Subcommands wrap the library
// one-to-one; every run ends with a single machine-readable report line.
//
// Exit codes: 0 answer/pass, 1 mathematical "false/none", 2 budget/unknown,
// 3 usage or input error.

#include "piwb/fdalg.hpp"
#include "piwb/idtest.hpp"
#include "piwb/kemer.hpp"
#include "piwb/symmetry.hpp"
#include "piwb/traceops.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

using namespace piwb;
using nlohmann::json;

namespace {

constexpr int EXIT_ANSWER = 0;
constexpr int EXIT_FALSE = 1;
constexpr int EXIT_UNKNOWN = 2;
constexpr int EXIT_USAGE = 3;

std::uint64_t fnv1a(const std::string &s, std::uint64_t h = 1469598103934665603ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

struct Report {
    std::string command;
    std::uint64_t digest = 1469598103934665603ULL;
    std::string outcome; // pass | fail | unknown
    json detail = json::object();
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void absorb(const std::string &s) { digest = fnv1a(s, digest); }
    void emit() const {
        json j;
        j["command"] = command;
        std::ostringstream dg;
        dg << std::hex << digest;
        j["digest"] = dg.str();
        j["outcome"] = outcome;
        j["detail"] = detail;
        j["ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
        std::cout << j.dump() << "\n";
    }
};

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

AlgebraWithData load_algebra(const std::string &path, Report &rep, const Limits &lim) {
    std::string text = slurp(path);
    rep.absorb(text);
    return parse_algebra_json(text, lim);
}

Polynomial load_poly_arg(const std::string &poly, const std::string &poly_file, Report &rep,
                         const Limits &lim) {
    std::string text = poly;
    if (!poly_file.empty()) text = slurp(poly_file);
    if (text.empty()) throw std::runtime_error("no polynomial given (use --poly or --poly-file)");
    rep.absorb(text);
    return parse_poly(text, lim);
}

int find_label(const FDAlgebra &A, const std::string &l) {
    for (int i = 0; i < A.dim(); ++i)
        if (A.labels()[static_cast<size_t>(i)] == l) return i;
    return -1;
}

// Assignment file: JSON object variable -> basis label or coordinate array.
EvalAssignment load_assignment(const std::string &path, const FDAlgebra &A, Report &rep) {
    std::string text = slurp(path);
    rep.absorb(text);
    json j = json::parse(text);
    EvalAssignment out;
    for (const auto &[k, v] : j.items()) {
        if (v.is_string()) {
            int idx = find_label(A, v.get<std::string>());
            if (idx < 0) throw std::runtime_error("unknown basis label: " + v.get<std::string>());
            out[var(k)] = A.basis_element(idx);
        } else {
            if (!v.is_array() || static_cast<int>(v.size()) != A.dim())
                throw std::runtime_error("assignment entry for " + k + " has wrong length");
            Vec vec(A.dim());
            for (int i = 0; i < A.dim(); ++i)
                vec(i) = v[static_cast<size_t>(i)].is_number_integer()
                             ? Rat(static_cast<long>(v[static_cast<size_t>(i)].get<long long>()))
                             : Rat::parse(v[static_cast<size_t>(i)].get<std::string>());
            out[var(k)] = vec;
        }
    }
    return out;
}

// "3x2+1x3" -> shape with fresh set variables.
AlternationShape parse_shape(const std::string &text, int extras) {
    AlternationShape shape;
    std::vector<std::pair<int, int>> groups;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t plus = text.find('+', pos);
        std::string part = text.substr(pos, plus == std::string::npos ? std::string::npos : plus - pos);
        size_t x = part.find('x');
        if (x == std::string::npos) throw std::runtime_error("bad shape term '" + part + "'");
        groups.emplace_back(std::stoi(part.substr(0, x)), std::stoi(part.substr(x + 1)));
        if (plus == std::string::npos) break;
        pos = plus + 1;
    }
    if (groups.empty() || groups.size() > 2) throw std::runtime_error("shape must be NxD[+MxD']");
    int counter = 1;
    auto emit = [&counter](int count, int size, std::vector<std::vector<VarId>> &dst) {
        for (int i = 0; i < count; ++i) {
            std::vector<VarId> s;
            for (int j = 0; j < size; ++j)
                s.push_back(var("q" + std::to_string(counter) + "_" + std::to_string(j + 1)));
            ++counter;
            if (size > 0) dst.push_back(s);
        }
    };
    emit(groups[0].first, groups[0].second, shape.small_sets);
    if (groups.size() == 2) {
        if (groups[1].second != groups[0].second + 1)
            throw std::runtime_error("big sets must have size d+1");
        emit(groups[1].first, groups[1].second, shape.big_sets);
    }
    for (int e = 0; e < extras; ++e) shape.free_vars.push_back(var("w" + std::to_string(e + 1)));
    return shape;
}

std::vector<VarId> parse_var_list(const std::string &text) {
    // "x1..x6" or "x1,x2,x3"
    std::vector<VarId> out;
    size_t dots = text.find("..");
    if (dots != std::string::npos) {
        std::string a = text.substr(0, dots), b = text.substr(dots + 2);
        size_t ia = a.find_last_not_of("0123456789") + 1;
        size_t ib = b.find_last_not_of("0123456789") + 1;
        std::string pa = a.substr(0, ia), pb = b.substr(0, ib);
        if (pa != pb || ia == a.size() || ib == b.size())
            throw std::runtime_error("bad variable range '" + text + "'");
        int lo = std::stoi(a.substr(ia)), hi = std::stoi(b.substr(ib));
        for (int i = lo; i <= hi; ++i) out.push_back(var(pa + std::to_string(i)));
        return out;
    }
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t comma = text.find(',', pos);
        std::string name = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!name.empty()) out.push_back(var(name));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

json assignment_json(const FDAlgebra &A, const BasisAssignment &a) {
    json j = json::object();
    for (const auto &[v, idx] : a) j[var_name(v)] = A.labels()[static_cast<size_t>(idx)];
    return j;
}

json tagged_assignment_json(const FDAlgebra &A, const WedderburnData &w, const BasisAssignment &a) {
    auto basis = wedderburn_basis(A, w);
    json j = json::object();
    for (const auto &[v, idx] : a) j[var_name(v)] = basis[static_cast<size_t>(idx)].label;
    return j;
}

void write_output(const std::string &text, const std::string &out_path) {
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(out_path);
        out << text;
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"pi-workbench: exact polynomial-identity computations on finite-dimensional algebras"};
    app.require_subcommand(1);

    std::string algebra_path, poly_text, poly_file, out_path, shape_text, cert_path;
    std::string assign_path, fk_file, gens_path, z_name = "z", vars_text, tableau_text, extra_name;
    std::string budget_text = "1e8";
    std::uint64_t skeletons = 20000;
    int threads = 0, extras = -1, nu = 3, nu_max = 3, deg = 12, random_n = 0, trials = 50;
    int k_param = 0, component = 0, word_len = 2, height = 4, exp_cap = 0, set_index = 0;
    bool exhaustive = false, corollary = false;

    auto add_common = [&](CLI::App *c) {
        c->add_option("--budget", budget_text, "elementary-operation budget (accepts 1e8 notation)");
        c->add_option("--threads", threads, "worker threads (0 = hardware)");
    };

    // builtin
    auto *cmd_builtin = app.add_subcommand("builtin", "emit a built-in algebra as JSON");
    std::vector<std::string> builtin_args;
    cmd_builtin->add_option("spec", builtin_args, "matrix k | ut d1 d2 .. | nilpotent g n | product a.json b.json | unitalize a.json")
        ->expected(-1);
    cmd_builtin->add_option("-o,--out", out_path, "output file (default stdout)");

    auto *cmd_verify = app.add_subcommand("verify", "validate an algebra file and its wedderburn data");
    cmd_verify->add_option("--algebra", algebra_path)->required();

    auto *cmd_par = app.add_subcommand("par", "print Par(A) = (dim semisimple, nilpotency - 1)");
    cmd_par->add_option("--algebra", algebra_path)->required();

    auto *cmd_radical = app.add_subcommand("radical", "print a basis of the Jacobson radical");
    cmd_radical->add_option("--algebra", algebra_path)->required();

    auto *cmd_id = app.add_subcommand("id-check", "exact identity test");
    cmd_id->add_option("--algebra", algebra_path)->required();
    cmd_id->add_option("--poly", poly_text);
    cmd_id->add_option("--poly-file", poly_file);
    cmd_id->add_flag("--exhaustive", exhaustive, "skip the randomized witness hunt");
    cmd_id->add_option("--random", random_n, "randomized witness hunt only (N samples)");
    add_common(cmd_id);

    auto *cmd_probe = app.add_subcommand("alt-probe", "search for a nonidentity with a given alternation shape");
    cmd_probe->add_option("--algebra", algebra_path)->required();
    cmd_probe->add_option("--shape", shape_text, "e.g. 3x2+1x3")->required();
    cmd_probe->add_option("--extras", extras, "maximum free variables (default 2 * number of sets)");
    cmd_probe->add_option("--skeletons", skeletons, "skeleton budget per universe");
    add_common(cmd_probe);

    auto *cmd_kprobe = app.add_subcommand("kemer-probe", "bounded Kemer-index estimation");
    cmd_kprobe->add_option("--algebra", algebra_path)->required();
    cmd_kprobe->add_option("--nu-max", nu_max);
    cmd_kprobe->add_option("--deg", deg, "degree budget");
    cmd_kprobe->add_option("--extras", extras, "extras budget (default 2 * number of sets)");
    cmd_kprobe->add_option("--skeletons", skeletons);
    add_common(cmd_kprobe);

    auto *cmd_ck = app.add_subcommand("construct-kemer", "constructive alternating-fold certificate from a full witness");
    cmd_ck->add_option("--algebra", algebra_path)->required();
    cmd_ck->add_option("--nu", nu)->required();
    cmd_ck->add_option("--base", poly_file, "file with the base polynomial")->required();
    cmd_ck->add_option("--out", out_path, "certificate output file");
    add_common(cmd_ck);

    auto *cmd_l2 = app.add_subcommand("assemble-kemer2", "assemble a small+big certificate from a property-K polynomial");
    cmd_l2->add_option("--algebra", algebra_path)->required();
    cmd_l2->add_option("--fk", fk_file, "file with the property-K polynomial")->required();
    cmd_l2->add_option("--witness", assign_path, "witness assignment JSON")->required();
    cmd_l2->add_option("--nu", nu)->required();
    cmd_l2->add_option("--out", out_path);
    add_common(cmd_l2);

    auto *cmd_full = app.add_subcommand("check-full", "do all nonvanishing evaluations visit every simple component?");
    cmd_full->add_option("--algebra", algebra_path)->required();
    cmd_full->add_option("--poly", poly_text);
    cmd_full->add_option("--poly-file", poly_file);
    add_common(cmd_full);

    auto *cmd_propk = app.add_subcommand("check-propk", "does the polynomial vanish below n_A - 1 radical substitutions?");
    cmd_propk->add_option("--algebra", algebra_path)->required();
    cmd_propk->add_option("--poly", poly_text);
    cmd_propk->add_option("--poly-file", poly_file);
    add_common(cmd_propk);

    auto *cmd_young = app.add_subcommand("young-decompose", "find a Young symmetrizer keeping the polynomial a nonidentity");
    cmd_young->add_option("--algebra", algebra_path)->required();
    cmd_young->add_option("--poly", poly_text);
    cmd_young->add_option("--poly-file", poly_file);
    add_common(cmd_young);

    auto *cmd_collapse = app.add_subcommand("collapse", "replace row variables by one variable per row");
    cmd_collapse->add_option("--poly", poly_text);
    cmd_collapse->add_option("--poly-file", poly_file);
    cmd_collapse->add_option("--tableau", tableau_text, "rows of numbers, e.g. '1,2;3'")->required();

    auto *cmd_delta = app.add_subcommand("delta", "apply the Zubrilin delta operator");
    cmd_delta->add_option("--k", k_param)->required();
    cmd_delta->add_option("--z", z_name, "replacement variable or monomial (v or v*w)");
    cmd_delta->add_option("--vars", vars_text, "designated variables: x1..x6 or x1,x2")->required();
    cmd_delta->add_option("--poly", poly_text);
    cmd_delta->add_option("--poly-file", poly_file);

    auto *cmd_zub = app.add_subcommand("zubrilin-check", "Cayley-Hamilton-type membership for a certificate");
    cmd_zub->add_option("--algebra", algebra_path)->required();
    cmd_zub->add_option("--cert", cert_path, "certificate JSON")->required();
    cmd_zub->add_option("--set", set_index, "index of the small set to designate (default 0)");
    cmd_zub->add_option("--extra", extra_name, "extra variable (default: first free variable)");
    cmd_zub->add_flag("--corollary", corollary, "also substitute the extra variable by z");
    add_common(cmd_zub);

    auto *cmd_tt = app.add_subcommand("trace-transfer", "trace transfer along an alternating polynomial");
    cmd_tt->add_option("--algebra", algebra_path)->required();
    cmd_tt->add_option("--component", component, "component index (0-based)");
    cmd_tt->add_option("--trials", trials);

    auto *cmd_tch = app.add_subcommand("trace-ch", "Cayley-Hamilton trace-integrality relation");
    cmd_tch->add_option("--algebra", algebra_path)->required();
    cmd_tch->add_option("--component", component, "component index (0-based)");
    cmd_tch->add_option("--trials", trials);

    auto *cmd_shir = app.add_subcommand("shirshov", "verify a Shirshov spanning set");
    cmd_shir->set_help_flag("--help", "print help"); // frees -h/--h for the height bound
    cmd_shir->add_option("--algebra", algebra_path)->required();
    cmd_shir->add_option("--gens", gens_path, "JSON list of generator vectors or labels")->required();
    cmd_shir->add_option("--m", word_len);
    cmd_shir->add_option("--h", height);
    cmd_shir->add_option("--exp-cap", exp_cap);
    add_common(cmd_shir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return EXIT_USAGE;
    }

    Report rep;
    rep.command = app.get_subcommands().front()->get_name();
    for (int i = 1; i < argc; ++i) rep.absorb(argv[i]);

    std::uint64_t budget_limit = 100'000'000;
    try {
        double b = std::stod(budget_text);
        if (b < 1 || b > 1e18) throw std::out_of_range("budget");
        budget_limit = static_cast<std::uint64_t>(b);
    } catch (const std::exception &) {
        std::cerr << "error: bad --budget value '" << budget_text << "'\n";
        return EXIT_USAGE;
    }

    Limits lim;
    int nthreads = threads > 0 ? threads
                               : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    try {
        if (cmd_builtin->parsed()) {
            if (builtin_args.empty()) throw std::runtime_error("builtin: missing constructor name");
            std::string name = builtin_args[0];
            std::optional<AlgebraWithData> built;
            if (name == "matrix") {
                built = build_matrix_algebra(std::stoi(builtin_args.at(1)));
            } else if (name == "ut") {
                std::vector<int> blocks;
                for (size_t i = 1; i < builtin_args.size(); ++i)
                    blocks.push_back(std::stoi(builtin_args[i]));
                built = build_ut(blocks);
            } else if (name == "nilpotent") {
                built = build_nilpotent_free(std::stoi(builtin_args.at(1)),
                                             std::stoi(builtin_args.at(2)));
            } else if (name == "product") {
                auto a = load_algebra(builtin_args.at(1), rep, lim);
                auto b = load_algebra(builtin_args.at(2), rep, lim);
                built = direct_product(a, b);
            } else if (name == "unitalize") {
                built = unitalize(load_algebra(builtin_args.at(1), rep, lim));
            } else {
                throw std::runtime_error("unknown builtin '" + name + "'");
            }
            write_output(algebra_to_json(*built), out_path);
            rep.outcome = "pass";
            rep.detail["dim"] = built->algebra.dim();
            rep.emit();
            return EXIT_ANSWER;
        }

        if (cmd_verify->parsed()) {
            auto awd = load_algebra(algebra_path, rep, lim);
            VerifyReport vr = verify_wedderburn(awd.algebra, awd.wedderburn);
            for (const auto &c : vr.checks)
                std::cout << (c.pass ? "pass " : "FAIL ") << c.check
                          << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
            rep.outcome = vr.all_pass() ? "pass" : "fail";
            rep.detail["checks"] = vr.checks.size();
            rep.emit();
            return vr.all_pass() ? EXIT_ANSWER : EXIT_FALSE;
        }

        if (cmd_par->parsed()) {
            auto awd = load_algebra(algebra_path, rep, lim);
            ParValue p = par(awd.algebra);
            std::cout << "Par = (" << p.d << ", " << p.s << ")\n";
            rep.outcome = "pass";
            rep.detail["d"] = p.d;
            rep.detail["s"] = p.s;
            rep.emit();
            return EXIT_ANSWER;
        }

        if (cmd_radical->parsed()) {
            auto awd = load_algebra(algebra_path, rep, lim);
            std::vector<Vec> J = radical(awd.algebra);
            std::cout << "radical dimension " << J.size() << "\n";
            for (const auto &v : J) std::cout << "  " << format_element(awd.algebra, v) << "\n";
            rep.outcome = "pass";
            rep.detail["dim"] = J.size();
            rep.emit();
            return EXIT_ANSWER;
        }

        if (cmd_id->parsed()) {
            auto awd = load_algebra(algebra_path, rep, lim);
            Polynomial f = load_poly_arg(poly_text, poly_file, rep, lim);
            Budget budget(budget_limit);
            IdTestOptions opt;
            opt.threads = nthreads;
            if (exhaustive) opt.prefilter_samples = 0;
            if (random_n > 0) {
                opt.prefilter_samples = random_n;
                // randomized mode: witness hunt only, never concludes identity
                std::set<VarId> vs = f.vars();
                std::vector<PolarizedComponent> comps = multilinearize(f, lim);
                for (const auto &pc : comps) {
                    if (pc.poly.is_zero()) continue;
                    Budget tiny(1); // forces unknown after the prefilter
                    IdentityResult r = is_identity_multilinear(awd.algebra, pc.poly, tiny, opt);
                    if (r.verdict == Verdict::NonIdentity) {
                        std::cout << "nonidentity (witness "
                                  << assignment_json(awd.algebra, r.witness->assignment).dump()
                                  << ")\n";
                        rep.outcome = "fail";
                        rep.emit();
                        return EXIT_FALSE;
                    }
                }
                std::cout << "unknown (randomized search found no witness)\n";
                rep.outcome = "unknown";
                rep.emit();
                return EXIT_UNKNOWN;
            }
            IdentityResult r = is_identity(awd.algebra, f, budget, lim, opt);
            if (r.verdict == Verdict::Identity) {
                std::cout << "identity\n";
                rep.outcome = "pass";
                rep.emit();
                return EXIT_ANSWER;
            }
            if (r.verdict == Verdict::NonIdentity) {
                std::cout << "nonidentity (witness "
                          << assignment_json(awd.algebra, r.witness->assignment).dump() << ")\n";
                rep.outcome = "fail";
                rep.detail["witness"] = assignment_json(awd.algebra, r.witness->assignment);
                rep.emit();
                return EXIT_FALSE;
            }
            std::cout << "unknown: " << r.note << "\n";
            rep.outcome = "unknown";
            rep.detail["note"] = r.note;
            rep.emit();
            return EXIT_UNKNOWN;
        }

        if (cmd_probe->parsed()) {
            auto awd = load_algebra(algebra_path, rep, lim);
            AlternationShape proto = parse_shape(shape_text, 0);
            int nsets = static_cast<int>(proto.small_sets.size() + proto.big_sets.size());
            int max_extras = extras >= 0 ? extras : 2 * nsets;
            Budget budget(budget_limit);
            Limits plim = lim;
            bool any_unknown = false;
            for (int e = 0; e <= max_extras; ++e) {
                AlternationShape shape = parse_shape(shape_text, e);
                plim.degree_cap = std::max(plim.degree_cap, shape.total_degree());
                ProbeConfig cfg;
                cfg.skeleton_budget = skeletons;
                cfg.idtest.threads = nthreads;
                cfg.idtest.prefilter_samples = 4;
                ProbeResult r = alt_shape_probe(awd.algebra, shape, budget, cfg, plim);
                if (r.outcome == ProbeOutcome::Witness) {
                    std::cout << "witness (extras " << e << "): " << to_string(*r.witness_poly)
                              << "\n  at " << assignment_json(awd.algebra, r.witness->assignment).dump()
                              << "\n";
                    rep.outcome = "pass";
                    rep.detail["extras"] = e;
                    rep.detail["witness_poly"] = to_string(*r.witness_poly);
                    rep.emit();
                    return EXIT_ANSWER;
                }
                if (r.outcome == ProbeOutcome::Unknown) {
                    any_unknown = true;
                    std::cout << "extras " << e << ": unknown (" << r.note << ")\n";
                } else {
                    std::cout << "extras " << e << ": none (exhausted, " << r.skeletons_tested
                              << " skeletons)\n";
                }
            }
            if (any_unknown) {
                std::cout << "unknown\n";
                rep.outcome = "unknown";
                rep.emit();
                return EXIT_UNKNOWN;
            }
            std::cout << "none (exhausted)\n";
            rep.outcome = "fail";
            rep.emit();
            return EXIT_FALSE;
        }

        if (cmd_kprobe->parsed()) {
            auto awd = load_algebra(algebra_path, rep, lim);
            VerifyReport vr = verify_wedderburn(awd.algebra, awd.wedderburn);
            const WedderburnData *w = vr.all_pass() ? &awd.wedderburn : nullptr;
            if (!vr.all_pass())
                std::cout << "note: wedderburn data did not verify; exactness disabled\n";
            ProbeBudgets budgets;
            budgets.degree_budget = deg;
            budgets.extras_budget = extras >= 0 ? extras : 2 * nu_max;
            budgets.skeleton_budget = skeletons;
            budgets.eval_budget = budget_limit;
            budgets.threads = nthreads;
            KemerProbeReport kr = kemer_probe(awd.algebra, w, nu_max, budgets, lim);
            auto status = [](CoordStatus s) {
                return s == CoordStatus::Exact ? "exact" : "lower-bound";
            };
            for (const auto &row : kr.rows)
                std::cout << "nu=" << row.nu << "  d_nu=" << row.d_nu << " (" << status(row.d_status)
                          << ")  s_nu=" << row.s_nu << " (" << status(row.s_status) << ")\n";
            std::cout << "index = (" << kr.index.d << ", " << kr.index.s << ")  ["
                      << status(kr.index.d_status) << ", " << status(kr.index.s_status) << "]\n";
            if (!kr.note.empty()) std::cout << "note: " << kr.note << "\n";
            rep.outcome = "pass";
            rep.detail["d"] = kr.index.d;
            rep.detail["s"] = kr.index.s;
            rep.detail["d_status"] = status(kr.index.d_status);
            rep.detail["s_status"] = status(kr.index.s_status);
            rep.emit();
            return EXIT_ANSWER;
        }

        if (cmd_ck->parsed()) {
            auto awd = load_algebra(algebra_path, rep, lim);
            Polynomial f = load_poly_arg("", poly_file, rep, lim);
            // Find a nonzero evaluation visiting every component, then read
            // off one designated variable per component.
            Budget budget(budget_limit);
            auto basis = wedderburn_basis(awd.algebra, awd.wedderburn);
            int q = static_cast<int>(awd.wedderburn.components.size());
            FullnessReport fr = check_full(awd.algebra, awd.wedderburn, f, budget);
            std::optional<BasisAssignment> full_visit;
            {
                // any nonzero full-visiting evaluation works, the check-full
                // witness may miss components, so rescan
                Budget b2(budget_limit);
                std::vector<NonzeroEval> hits;
                std::set<VarId> vset = f.vars();
                std::vector<VarId> fvars(vset.begin(), vset.end());
                std::vector<int> tuple(fvars.size(), 0);
                EvalAssignment sigma;
                bool done = fvars.empty();
                while (!done) {
                    for (size_t i = 0; i < fvars.size(); ++i)
                        sigma[fvars[i]] = basis[static_cast<size_t>(tuple[i])].value;
                    if (!eval(awd.algebra, f, sigma).isZero(Rat(0))) {
                        std::vector<bool> seen(static_cast<size_t>(q), false);
                        for (int idx : tuple) {
                            int c = basis[static_cast<size_t>(idx)].component;
                            if (c >= 0) seen[static_cast<size_t>(c)] = true;
                        }
                        if (std::all_of(seen.begin(), seen.end(), [](bool x) { return x; })) {
                            BasisAssignment a;
                            for (size_t i = 0; i < fvars.size(); ++i) a[fvars[i]] = tuple[i];
                            full_visit = a;
                            break;
                        }
                    }
                    size_t p = tuple.size();
                    done = true;
                    while (p > 0) {
                        --p;
                        if (++tuple[p] < static_cast<int>(basis.size())) { done = false; break; }
                        tuple[p] = 0;
                    }
                }
            }
            if (!full_visit) {
                std::cout << "no evaluation visits every simple component; cannot construct\n";
                rep.outcome = "fail";
                rep.emit();
                return EXIT_FALSE;
            }
            FullWitness base;
            base.poly = f;
            std::vector<int> chosen(static_cast<size_t>(q), -1);
            for (const auto &[v, idx] : *full_visit) {
                base.assignment[v] = basis[static_cast<size_t>(idx)].value;
                int c = basis[static_cast<size_t>(idx)].component;
                if (c >= 0 && chosen[static_cast<size_t>(c)] < 0) {
                    chosen[static_cast<size_t>(c)] = 1;
                    base.component_vars.push_back(v);
                }
            }
            KemerCertificate cert = construct_kemer_lemma1(awd.algebra, awd.wedderburn, base, nu, lim);
            VerifyReport cv = verify_kemer_certificate(awd.algebra, cert);
            write_output(certificate_to_json(cert, awd.algebra), out_path);
            rep.outcome = cv.all_pass() ? "pass" : "fail";
            rep.detail["small_sets"] = cert.shape.small_sets.size();
            rep.detail["full_input"] = fr.full.has_value() && *fr.full;
            rep.emit();
            return cv.all_pass() ? EXIT_ANSWER : EXIT_FALSE;
        }

        if (cmd_l2->parsed()) {
            auto awd = load_algebra(algebra_path, rep, lim);
            Polynomial fk = load_poly_arg("", fk_file, rep, lim);
            EvalAssignment witness = load_assignment(assign_path, awd.algebra, rep);
            Budget budget(budget_limit);
            try {
                KemerCertificate cert =
                    assemble_kemer_lemma2_unital(awd.algebra, awd.wedderburn, fk, witness, nu, budget, lim);
                bool basic = basic_certified(awd.algebra, awd.wedderburn, cert);
                if (basic)
                    std::cout << "certificate shape meets Par(A): algebra certified basic\n";
                write_output(certificate_to_json(cert, awd.algebra), out_path);
                rep.outcome = "pass";
                rep.detail["small_sets"] = cert.shape.small_sets.size();
                rep.detail["big_sets"] = cert.shape.big_sets.size();
                rep.detail["basic_certified"] = basic;
                rep.emit();
                return EXIT_ANSWER;
            } catch (const Lemma2Error &e) {
                std::cout << "not assembled: " << e.what() << "\n";
                rep.outcome = "fail";
                rep.detail["step"] = e.step;
                rep.emit();
                return EXIT_FALSE;
            }
        }

        if (cmd_full->parsed()) {
            auto awd = load_algebra(algebra_path, rep, lim);
            Polynomial f = load_poly_arg(poly_text, poly_file, rep, lim);
            Budget budget(budget_limit);
            FullnessReport r = check_full(awd.algebra, awd.wedderburn, f, budget);
            if (!r.nonidentity.has_value()) {
                std::cout << "unknown: " << r.note << "\n";
                rep.outcome = "unknown";
                rep.emit();
                return EXIT_UNKNOWN;
            }
            std::cout << "nonidentity: " << (*r.nonidentity ? "yes" : "no") << "\n";
            std::cout << "full: " << (*r.full ? "yes" : "no") << "\n";
            if (r.violating)
                std::cout << "violating evaluation (misses component " << r.missing_component + 1
                          << "): "
                          << tagged_assignment_json(awd.algebra, awd.wedderburn, *r.violating).dump()
                          << "\n";
            rep.outcome = *r.full ? "pass" : "fail";
            rep.emit();
            return *r.full ? EXIT_ANSWER : EXIT_FALSE;
        }

        if (cmd_propk->parsed()) {
            auto awd = load_algebra(algebra_path, rep, lim);
            Polynomial f = load_poly_arg(poly_text, poly_file, rep, lim);
            Budget budget(budget_limit);
            PropertyKReport r = check_property_k(awd.algebra, awd.wedderburn, f, budget);
            if (!r.holds.has_value()) {
                std::cout << "unknown: " << r.note << "\n";
                rep.outcome = "unknown";
                rep.emit();
                return EXIT_UNKNOWN;
            }
            std::cout << "property K: " << (*r.holds ? "holds" : "fails") << "\n";
            if (r.violating)
                std::cout << "violator: "
                          << tagged_assignment_json(awd.algebra, awd.wedderburn, *r.violating).dump()
                          << "\n";
            rep.outcome = *r.holds ? "pass" : "fail";
            rep.emit();
            return *r.holds ? EXIT_ANSWER : EXIT_FALSE;
        }

        if (cmd_young->parsed()) {
            auto awd = load_algebra(algebra_path, rep, lim);
            Polynomial f = load_poly_arg(poly_text, poly_file, rep, lim);
            Budget budget(budget_limit);

            auto render = [](const Partition &mu, const Tableau &T) {
                std::string s = "(";
                for (size_t i = 0; i < mu.size(); ++i) s += (i ? "," : "") + std::to_string(mu[i]);
                s += ") rows";
                for (const auto &row : T.rows) {
                    s += " [";
                    for (size_t i = 0; i < row.size(); ++i)
                        s += (i ? "," : "") + std::to_string(row[i]);
                    s += "]";
                }
                return s;
            };

            {
                Budget pre(budget_limit);
                IdentityResult base = is_identity_multilinear(awd.algebra, f, pre);
                if (base.verdict != Verdict::NonIdentity) {
                    std::cout << "input is an identity (or undecided); nothing to decompose\n";
                    rep.outcome = "fail";
                    rep.emit();
                    return EXIT_FALSE;
                }
            }

            int n = static_cast<int>(f.vars().size());
            std::optional<SymmetrizerHit> hit;
            Limits ylim = lim;
            ylim.degree_cap = std::max(lim.degree_cap, n);
            for (const Partition &mu : partitions(n, ylim)) {
                if (hit) break;
                for (const Tableau &T : standard_tableaux(mu)) {
                    Polynomial g = young_apply(T, f);
                    if (g.is_zero()) {
                        std::cout << render(mu, T) << ": zero image\n";
                        continue;
                    }
                    IdentityResult r = is_identity_multilinear(awd.algebra, g, budget);
                    if (r.verdict == Verdict::Unknown) {
                        std::cout << "unknown: budget exhausted at " << render(mu, T) << "\n";
                        rep.outcome = "unknown";
                        rep.emit();
                        return EXIT_UNKNOWN;
                    }
                    bool nonid = r.verdict == Verdict::NonIdentity;
                    std::cout << render(mu, T) << ": " << (nonid ? "nonidentity" : "identity")
                              << "\n";
                    if (nonid) {
                        hit = SymmetrizerHit{mu, T, g, *r.witness};
                        break;
                    }
                }
            }
            if (!hit) throw std::logic_error("no symmetrizer hit for a verified nonidentity");
            Polynomial ghat = collapse_rows(hit->tableau, hit->image);
            std::cout << "collapsed: " << to_string(ghat) << "\n";
            rep.outcome = "pass";
            rep.detail["height"] = hit->tableau.height();
            rep.emit();
            return EXIT_ANSWER;
        }

        if (cmd_collapse->parsed()) {
            Polynomial g = load_poly_arg(poly_text, poly_file, rep, lim);
            Tableau T;
            {
                std::stringstream ss(tableau_text);
                std::string row;
                while (std::getline(ss, row, ';')) {
                    std::vector<int> nums;
                    std::stringstream rs(row);
                    std::string cell;
                    while (std::getline(rs, cell, ',')) nums.push_back(std::stoi(cell));
                    T.rows.push_back(nums);
                    T.shape.push_back(static_cast<int>(nums.size()));
                }
            }
            Polynomial ghat = collapse_rows(T, g);
            std::cout << to_string(ghat) << "\n";
            rep.outcome = "pass";
            rep.emit();
            return EXIT_ANSWER;
        }

        if (cmd_delta->parsed()) {
            Polynomial f = load_poly_arg(poly_text, poly_file, rep, lim);
            DeltaSpec spec;
            spec.k = k_param;
            std::vector<VarId> zw;
            for (VarId v : parse_var_list(z_name)) zw.push_back(v);
            // allow z as v*w monomial text
            if (z_name.find('*') != std::string::npos) {
                zw.clear();
                std::stringstream ss(z_name);
                std::string part;
                while (std::getline(ss, part, '*')) zw.push_back(var(part));
            }
            spec.z = Monomial(zw);
            spec.designated = parse_var_list(vars_text);
            Limits wide = lim;
            wide.degree_cap = std::max(lim.degree_cap,
                                       f.degree() + spec.k * spec.z.degree());
            Polynomial out = delta(spec, f, wide);
            std::cout << to_string(out) << "\n";
            rep.outcome = "pass";
            rep.detail["terms"] = out.term_count();
            rep.emit();
            return EXIT_ANSWER;
        }

        if (cmd_zub->parsed()) {
            auto awd = load_algebra(algebra_path, rep, lim);
            std::string cert_text = slurp(cert_path);
            rep.absorb(cert_text);
            KemerCertificate cert = certificate_from_json(cert_text, awd.algebra, lim);
            VerifyReport cv = verify_kemer_certificate(awd.algebra, cert);
            if (!cv.all_pass()) {
                std::cout << "certificate failed verification\n";
                rep.outcome = "fail";
                rep.emit();
                return EXIT_FALSE;
            }
            if (cert.shape.small_sets.empty()) throw std::runtime_error("certificate has no small sets");
            if (set_index < 0 || set_index >= static_cast<int>(cert.shape.small_sets.size()))
                throw std::runtime_error("--set out of range");
            std::vector<VarId> designated = cert.shape.small_sets[static_cast<size_t>(set_index)];
            VarId extra = extra_name.empty() ? choose_zubrilin_extra(cert, set_index)
                                             : var(extra_name);
            VarId z = VarTable::instance().fresh("zch");
            Budget budget(budget_limit);
            IdTestOptions opt;
            opt.threads = nthreads;
            rep.detail["set"] = set_index;
            rep.detail["extra"] = var_name(extra);
            ZubrilinResult r = zubrilin_ch_check(awd.algebra, cert.poly, designated, extra, z,
                                                 budget, lim, opt, corollary);
            if (r.verdict == Verdict::Identity) {
                std::cout << "membership holds (combination is an identity)\n";
                rep.outcome = "pass";
                rep.emit();
                return EXIT_ANSWER;
            }
            if (r.verdict == Verdict::NonIdentity) {
                std::cout << "membership FAILS: combination is a nonidentity\n";
                rep.outcome = "fail";
                rep.emit();
                return EXIT_FALSE;
            }
            std::cout << "unknown: " << r.note << "\n";
            rep.outcome = "unknown";
            rep.emit();
            return EXIT_UNKNOWN;
        }

        if (cmd_tt->parsed() || cmd_tch->parsed()) {
            bool transfer = cmd_tt->parsed();
            auto awd = load_algebra(algebra_path, rep, lim);
            if (component < 0 || component >= static_cast<int>(awd.wedderburn.components.size()))
                throw std::runtime_error("--component out of range");
            const auto &comp = awd.wedderburn.components[static_cast<size_t>(component)];
            std::vector<Vec> span = comp.units;
            int d = static_cast<int>(span.size());
            std::mt19937 rng(0x7ace5);
            std::uniform_int_distribution<int> coef(-4, 4), pick(0, awd.algebra.dim() - 1);
            bool all_pass = true;
            for (int it = 0; it < trials && all_pass; ++it) {
                Vec a0 = awd.algebra.zero();
                for (const auto &u : span) a0 += Rat(coef(rng)) * u;
                if (transfer) {
                    std::vector<VarId> xs;
                    for (int i = 1; i <= d; ++i) xs.push_back(var("x" + std::to_string(i)));
                    std::vector<VarId> borders;
                    for (int i = 1; i < d; ++i) borders.push_back(var("b" + std::to_string(i)));
                    Limits wide = lim;
                    wide.degree_cap = std::max(lim.degree_cap, 2 * d);
                    Polynomial f = d == 1 ? Polynomial::variable(xs[0]) : capelli(xs, borders, wide);
                    EvalAssignment lambda;
                    for (VarId b : borders) lambda[b] = awd.algebra.basis_element(pick(rng));
                    TraceTransferResult r = trace_transfer_check(awd.algebra, span, a0, f, xs, lambda);
                    all_pass = r.pass;
                } else {
                    TraceIntegrality r = trace_integrality_relation(awd.algebra, span, a0);
                    all_pass = r.residual.isZero(Rat(0));
                }
            }
            std::cout << (transfer ? "trace transfer: " : "trace integrality: ")
                      << (all_pass ? "pass" : "FAIL") << " over " << trials << " trials\n";
            rep.outcome = all_pass ? "pass" : "fail";
            rep.detail["trials"] = trials;
            rep.emit();
            return all_pass ? EXIT_ANSWER : EXIT_FALSE;
        }

        if (cmd_shir->parsed()) {
            auto awd = load_algebra(algebra_path, rep, lim);
            std::string gens_text = slurp(gens_path);
            rep.absorb(gens_text);
            json gj = json::parse(gens_text);
            ShirshovConfig cfg;
            for (const auto &g : gj) {
                if (g.is_string()) {
                    int idx = find_label(awd.algebra, g.get<std::string>());
                    if (idx < 0) throw std::runtime_error("unknown basis label " + g.get<std::string>());
                    cfg.generators.push_back(awd.algebra.basis_element(idx));
                } else {
                    Vec v(awd.algebra.dim());
                    for (int i = 0; i < awd.algebra.dim(); ++i)
                        v(i) = g[static_cast<size_t>(i)].is_number_integer()
                                   ? Rat(static_cast<long>(g[static_cast<size_t>(i)].get<long long>()))
                                   : Rat::parse(g[static_cast<size_t>(i)].get<std::string>());
                    cfg.generators.push_back(v);
                }
            }
            cfg.word_length = word_len;
            cfg.height = height;
            cfg.exponent_cap = exp_cap;
            Budget budget(budget_limit);
            ShirshovReport r = shirshov_span_check(awd.algebra, cfg, budget);
            if (r.budget_exceeded) {
                std::cout << "unknown: " << r.note << "\n";
                rep.outcome = "unknown";
                rep.emit();
                return EXIT_UNKNOWN;
            }
            std::cout << "subalgebra dimension " << r.subalgebra_dim << ", spanned: "
                      << (r.spans ? "yes" : "no");
            if (r.minimal_height) std::cout << " (minimal height " << *r.minimal_height << ")";
            std::cout << "\n";
            rep.outcome = r.spans ? "pass" : "fail";
            rep.detail["spans"] = r.spans;
            rep.emit();
            return r.spans ? EXIT_ANSWER : EXIT_FALSE;
        }

        throw std::runtime_error("no subcommand dispatched");
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        rep.outcome = "error";
        rep.detail["error"] = e.what();
        rep.emit();
        return EXIT_USAGE;
    }
}
