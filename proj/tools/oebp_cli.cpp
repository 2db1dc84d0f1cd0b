#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oebp/adversary.hpp"
#include "oebp/bounds.hpp"
#include "oebp/core.hpp"
#include "oebp/exact.hpp"
#include "oebp/experiments.hpp"
#include "oebp/greedy.hpp"
#include "oebp/io.hpp"

namespace {

constexpr int kExitUsage = 2;   // bad flags, bad input, violated preconditions
constexpr int kExitBudget = 3;  // solver budget exhausted
constexpr int kExitClaim = 4;   // a recorded claim or weight check failed

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open '" + path + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("failed while writing '" + path + "'");
}

std::string sidecar_path_for(const std::string& out) {
    const std::string suffix = ".json";
    if (out.size() > suffix.size() &&
        out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0)
        return out.substr(0, out.size() - suffix.size()) + ".case.json";
    return out + ".case.json";
}

// OEBP_MAX_ITEMS raises or lowers the default exact-solver budget; an
// explicit --max-n always wins.
long long default_max_items() {
    const char* env = std::getenv("OEBP_MAX_ITEMS");
    if (env == nullptr || *env == '\0') return oebp::SolveBudget{}.max_items;
    std::string text(env);
    size_t used = 0;
    long long value = 0;
    try {
        value = std::stoll(text, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("OEBP_MAX_ITEMS='" + text + "' is not an integer");
    }
    if (used != text.size() || value < 1)
        throw std::invalid_argument("OEBP_MAX_ITEMS='" + text + "' must be a positive integer");
    return value;
}

std::vector<oebp::Rat> parse_grid(const std::string& text) {
    std::vector<oebp::Rat> grid;
    std::string current;
    auto flush = [&]() {
        size_t first = current.find_first_not_of(" \t");
        if (first == std::string::npos)
            throw std::invalid_argument("--beta-grid contains an empty entry");
        size_t last = current.find_last_not_of(" \t");
        grid.push_back(oebp::parse_rat(current.substr(first, last - first + 1)));
        current.clear();
    };
    for (char ch : text) {
        if (ch == ',')
            flush();
        else
            current += ch;
    }
    flush();
    return grid;
}

struct GenerateArgs {
    std::string name;
    std::string beta;
    std::string kind;
    long long n = 0;
    long long m = 0;
    long long t = 0;
    long long k = 0;
    int which = 0;
    std::string out;
    CLI::Option* beta_opt = nullptr;
    CLI::Option* kind_opt = nullptr;
    CLI::Option* n_opt = nullptr;
    CLI::Option* m_opt = nullptr;
    CLI::Option* t_opt = nullptr;
    CLI::Option* k_opt = nullptr;
    CLI::Option* which_opt = nullptr;
    CLI::Option* out_opt = nullptr;
};

void require_flag(const GenerateArgs& args, const CLI::Option* option, const char* flag) {
    if (option->count() == 0)
        throw std::invalid_argument("generate " + args.name + ": missing required flag " + flag);
}

int cmd_generate(const GenerateArgs& args) {
    using namespace oebp;
    AdversarialCase c;
    if (args.name == "nf-lower") {
        require_flag(args, args.beta_opt, "--beta");
        require_flag(args, args.n_opt, "--n");
        require_flag(args, args.m_opt, "--m");
        c = gen_nf_lower(parse_rat(args.beta), args.n, args.m);
    } else if (args.name == "af-lower") {
        require_flag(args, args.t_opt, "--t");
        require_flag(args, args.n_opt, "--n");
        require_flag(args, args.m_opt, "--m");
        c = gen_af_lower(args.t, args.n, args.m);
    } else if (args.name == "ff-lower") {
        require_flag(args, args.beta_opt, "--beta");
        require_flag(args, args.n_opt, "--n");
        c = gen_ff_lower(parse_rat(args.beta), args.n);
    } else if (args.name == "nfd-lower") {
        require_flag(args, args.t_opt, "--t");
        require_flag(args, args.n_opt, "--n");
        c = gen_nfd_lower(args.t, args.n);
    } else if (args.name == "ffd-lower") {
        require_flag(args, args.n_opt, "--n");
        c = gen_ffd_lower(args.n);
    } else if (args.name == "ffd-param-lower") {
        require_flag(args, args.t_opt, "--t");
        require_flag(args, args.n_opt, "--n");
        c = gen_ffd_param_lower(args.t, args.n);
    } else if (args.name == "batched-lower") {
        require_flag(args, args.t_opt, "--t");
        require_flag(args, args.n_opt, "--n");
        c = gen_batched_lower(args.t, args.n);
    } else if (args.name == "poc-lower") {
        require_flag(args, args.n_opt, "--n");
        c = gen_poc_lower(args.n);
    } else if (args.name == "poc-param-lower") {
        require_flag(args, args.beta_opt, "--beta");
        require_flag(args, args.m_opt, "--m");
        require_flag(args, args.which_opt, "--which");
        c = gen_poc_param_lower(parse_rat(args.beta), args.m, args.which);
    } else if (args.name == "min-poc-lower") {
        require_flag(args, args.n_opt, "--n");
        c = gen_min_poc_lower(args.n);
    } else if (args.name == "min-poc-param-lower") {
        require_flag(args, args.kind_opt, "--kind");
        require_flag(args, args.n_opt, "--n");
        if (args.kind == "reciprocal") {
            require_flag(args, args.t_opt, "--t");
            c = gen_min_poc_param_lower(MinPocKind::Reciprocal, args.t, args.n);
        } else if (args.kind == "complement") {
            require_flag(args, args.k_opt, "--k");
            c = gen_min_poc_param_lower(MinPocKind::Complement, args.k, args.n);
        } else {
            throw std::invalid_argument("generate min-poc-param-lower: --kind must be "
                                        "reciprocal or complement, got '" +
                                        args.kind + "'");
        }
    } else {
        throw std::invalid_argument(
            "unknown case '" + args.name +
            "' (expected nf-lower|af-lower|ff-lower|nfd-lower|ffd-lower|ffd-param-lower|"
            "batched-lower|poc-lower|poc-param-lower|min-poc-lower|min-poc-param-lower)");
    }

    std::cout << "generator=" << c.generator << " target=" << c.target_algorithm
              << " variant=" << variant_str(c.instance.variant)
              << " items=" << c.instance.items.size() << " alg_bins=" << c.claimed_alg_bins
              << " cert_bins=" << c.claimed_cert_bins << " ratio=" << rat_str(c.claimed_ratio)
              << "\n";
    if (args.out_opt->count() > 0) {
        std::string sidecar = sidecar_path_for(args.out);
        write_file(args.out, save_instance(c.instance));
        write_file(sidecar, sidecar_str(c));
        std::cout << "instance=" << args.out << " sidecar=" << sidecar << "\n";
    }
    return 0;
}

oebp::WeightFn make_weight_fn(const std::string& id, const CLI::Option* t_opt, long long t,
                              const CLI::Option* k_opt, long long k, const CLI::Option* beta_opt,
                              const std::string& beta_text, const CLI::Option* theta_opt,
                              const std::string& theta_text) {
    using namespace oebp;
    auto need = [&](const CLI::Option* option, const char* flag) {
        if (option->count() == 0)
            throw std::invalid_argument("verify: weight function '" + id + "' needs " + flag);
    };
    if (id == "ff_w" || id == "nfd_w" || id == "batched_w") {
        need(beta_opt, "--beta");
        Rat beta = parse_rat(beta_text);
        long long tt = t_opt->count() > 0 ? t : (beta == Rat(1) ? 0 : t_of_beta(beta));
        if (id == "ff_w") return ff_weight(tt, beta);
        if (id == "nfd_w") return nfd_weight(tt, beta);
        return batched_weight(tt, beta);
    }
    if (id == "ffd_w") return ffd_weight();
    if (id == "ffd_half_w1") return ffd_half_weight1();
    if (id == "ffd_half_w2") {
        need(theta_opt, "--theta");
        return ffd_half_weight2(parse_rat(theta_text));
    }
    if (id == "poc_max_w") return poc_max_weight();
    if (id == "poc_param_w") {
        need(t_opt, "--t");
        return poc_param_weight(t);
    }
    if (id == "min_poc_w") {
        need(k_opt, "--k");
        return min_poc_weight(k);
    }
    throw std::invalid_argument("unknown weight function '" + id +
                                "' (expected ff_w|nfd_w|ffd_w|ffd_half_w1|ffd_half_w2|"
                                "batched_w|poc_max_w|poc_param_w|min_poc_w)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Open-end bin packing: generators, packers, exact solver, "
                 "clustered/batched evaluation, sweeps, and weight checks.\n"
                 "Rationals are written p/q (decimals are rejected). The environment\n"
                 "variable OEBP_MAX_ITEMS overrides the default exact-solver budget."};
    app.require_subcommand(1);

    GenerateArgs gen;
    CLI::App* generate = app.add_subcommand("generate", "Build an adversarial case");
    generate->add_option("case", gen.name, "Case name, e.g. ffd-lower")->required();
    gen.beta_opt = generate->add_option("--beta", gen.beta, "Size cap as p/q");
    gen.n_opt = generate->add_option("--n", gen.n, "Primary size parameter");
    gen.m_opt = generate->add_option("--m", gen.m, "Secondary size parameter");
    gen.t_opt = generate->add_option("--t", gen.t, "Reciprocal cap parameter");
    gen.k_opt = generate->add_option("--k", gen.k, "Complement cap parameter");
    gen.which_opt = generate->add_option("--which", gen.which, "Sub-construction, 1 or 2");
    gen.kind_opt = generate->add_option("--kind", gen.kind, "reciprocal or complement");
    gen.out_opt = generate->add_option("--out", gen.out,
                                       "Instance path; the certificate sidecar lands "
                                       "next to it as *.case.json");

    std::string pack_alg, pack_in, pack_rule, pack_out;
    CLI::App* pack = app.add_subcommand("pack", "Run a greedy packer on an instance");
    pack->add_option("--alg", pack_alg, "nf|wf|ff|nfd|ffd")->required();
    pack->add_option("--in", pack_in, "Instance JSON path")->required();
    CLI::Option* pack_rule_opt =
        pack->add_option("--wf-rule", pack_rule, "min-total|min-total-excl-max (wf only)");
    CLI::Option* pack_out_opt = pack->add_option("--out", pack_out, "Packing JSON path");

    std::string opt_in, opt_out;
    long long opt_max_n = 0;
    unsigned long long opt_node_limit = 0;
    CLI::App* opt = app.add_subcommand("opt", "Solve a small instance exactly");
    opt->add_option("--in", opt_in, "Instance JSON path")->required();
    CLI::Option* opt_max_n_opt =
        opt->add_option("--max-n", opt_max_n, "Item budget (default 16 or OEBP_MAX_ITEMS)");
    CLI::Option* opt_node_opt =
        opt->add_option("--node-limit", opt_node_limit, "Search node limit");
    CLI::Option* opt_out_opt = opt->add_option("--out", opt_out, "Packing JSON path");

    auto add_partition_flags = [](CLI::App* sub, std::string& in, std::string& mode,
                                  std::string& sidecar, std::string& out, long long& max_n,
                                  CLI::Option*& sidecar_opt, CLI::Option*& out_opt,
                                  CLI::Option*& max_n_opt) {
        sub->add_option("--in", in, "Instance JSON path")->required();
        sub->add_option("--mode", mode, "exact|certificate|greedy-upper")
            ->default_val("exact");
        sidecar_opt = sub->add_option("--sidecar", sidecar,
                                      "Case sidecar JSON supplying certificates");
        max_n_opt = sub->add_option("--max-n", max_n,
                                    "Item budget (default 16 or OEBP_MAX_ITEMS)");
        out_opt = sub->add_option("--out", out, "Report JSON path");
    };
    std::string poc_in, poc_mode, poc_sidecar, poc_out;
    long long poc_max_n = 0;
    CLI::Option *poc_sidecar_opt, *poc_out_opt, *poc_max_n_opt;
    CLI::App* poc = app.add_subcommand("poc", "Cost clusters in isolation vs globally");
    add_partition_flags(poc, poc_in, poc_mode, poc_sidecar, poc_out, poc_max_n, poc_sidecar_opt,
                        poc_out_opt, poc_max_n_opt);
    std::string batch_in, batch_mode, batch_sidecar, batch_out;
    long long batch_max_n = 0;
    CLI::Option *batch_sidecar_opt, *batch_out_opt, *batch_max_n_opt;
    CLI::App* batch = app.add_subcommand("batch", "Cost batches 1..l in isolation vs globally");
    add_partition_flags(batch, batch_in, batch_mode, batch_sidecar, batch_out, batch_max_n,
                        batch_sidecar_opt, batch_out_opt, batch_max_n_opt);

    std::string sweep_alg, sweep_grid, sweep_out, sweep_json_path;
    long long sweep_n = 25, sweep_m = 0;
    CLI::App* sweep = app.add_subcommand("sweep", "Measure lower-bound cases over a beta grid");
    sweep->add_option("--alg", sweep_alg, "nf|wf|ff|nfd|ffd|batched|poc|min-poc")->required();
    sweep->add_option("--beta-grid", sweep_grid, "Comma-separated p/q values")->required();
    sweep->add_option("--n", sweep_n, "Construction size (M for poc targets)");
    sweep->add_option("--m", sweep_m, "Secondary construction parameter");
    sweep->add_option("--out", sweep_out, "CSV output path")->required();
    CLI::Option* sweep_json_opt =
        sweep->add_option("--json", sweep_json_path, "Also write a JSON mirror here");

    std::string ver_in, ver_packing, ver_weights, ver_beta, ver_theta, ver_cap, ver_floor,
        ver_out;
    long long ver_t = 0, ver_k = 0, ver_exceptions = 0;
    bool ver_non_strict = false;
    CLI::App* verify = app.add_subcommand("verify", "Check bin weights of a packing");
    verify->add_option("--in", ver_in, "Instance JSON path")->required();
    verify->add_option("--packing", ver_packing, "Packing JSON path")->required();
    verify->add_option("--weights", ver_weights, "Weight function id, e.g. ff_w")->required();
    CLI::Option* ver_t_opt = verify->add_option("--t", ver_t, "Weight parameter t");
    CLI::Option* ver_k_opt = verify->add_option("--k", ver_k, "Weight parameter k");
    CLI::Option* ver_beta_opt = verify->add_option("--beta", ver_beta, "Weight domain cap p/q");
    CLI::Option* ver_theta_opt = verify->add_option("--theta", ver_theta, "Weight parameter p/q");
    CLI::Option* ver_cap_opt =
        verify->add_option("--cap", ver_cap, "Require every bin weight below this p/q");
    CLI::Option* ver_floor_opt =
        verify->add_option("--floor", ver_floor, "Require bin weights at least this p/q");
    verify->add_option("--exceptions", ver_exceptions, "Bins allowed below --floor (default 0)");
    verify->add_flag("--non-strict", ver_non_strict, "With --cap, allow weights equal to it");
    CLI::Option* ver_out_opt = verify->add_option("--out", ver_out, "Report JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    using namespace oebp;
    try {
        if (generate->parsed()) return cmd_generate(gen);

        if (pack->parsed()) {
            Instance instance = load_instance(read_file(pack_in));
            WfRule rule = WfRule::MinTotal;
            if (pack_rule_opt->count() > 0) {
                if (pack_alg != "wf")
                    throw std::invalid_argument("--wf-rule applies only to --alg wf");
                if (pack_rule == "min-total")
                    rule = WfRule::MinTotal;
                else if (pack_rule == "min-total-excl-max")
                    rule = WfRule::MinTotalExclMax;
                else
                    throw std::invalid_argument("unknown --wf-rule '" + pack_rule +
                                                "' (expected min-total|min-total-excl-max)");
            }
            PackResult result = run_algorithm(pack_alg, instance, rule);
            std::cout << "bins=" << result.packing.bin_count() << "\n";
            if (pack_out_opt->count() > 0) write_file(pack_out, save_packing(result.packing));
            return 0;
        }

        if (opt->parsed()) {
            Instance instance = load_instance(read_file(opt_in));
            SolveBudget budget;
            budget.max_items = opt_max_n_opt->count() > 0 ? opt_max_n : default_max_items();
            if (opt_node_opt->count() > 0) budget.node_limit = opt_node_limit;
            ExactResult result = optimal_packing(instance, budget);
            std::cout << "bins=" << result.packing.bin_count()
                      << " status=" << (result.proven_optimal ? "optimal" : "incumbent")
                      << " nodes=" << result.nodes << "\n";
            if (opt_out_opt->count() > 0) write_file(opt_out, save_packing(result.packing));
            return 0;
        }

        if (poc->parsed() || batch->parsed()) {
            bool clustered = poc->parsed();
            const std::string& in = clustered ? poc_in : batch_in;
            const std::string& mode_text = clustered ? poc_mode : batch_mode;
            const std::string& sidecar = clustered ? poc_sidecar : batch_sidecar;
            const std::string& out = clustered ? poc_out : batch_out;
            CLI::Option* sidecar_opt = clustered ? poc_sidecar_opt : batch_sidecar_opt;
            CLI::Option* out_opt = clustered ? poc_out_opt : batch_out_opt;
            CLI::Option* max_n_opt = clustered ? poc_max_n_opt : batch_max_n_opt;
            Instance instance = load_instance(read_file(in));
            SolverMode mode = parse_solver_mode(mode_text);
            SolveBudget budget;
            budget.max_items = max_n_opt->count() > 0 ? (clustered ? poc_max_n : batch_max_n)
                                                      : default_max_items();
            std::optional<AdversarialCase> side;
            if (sidecar_opt->count() > 0)
                side = case_from_sidecar_json(Json::parse(read_file(sidecar)), instance);
            const Packing* global_cert = side ? &side->certificate : nullptr;
            const std::map<long long, Packing>* part_certs =
                side ? &side->cluster_certificates : nullptr;
            PocReport report =
                clustered ? run_clustered(instance, mode, budget, global_cert, part_certs)
                          : run_batched(instance, mode, budget, global_cert, part_certs);
            Json j = poc_report_to_json(report, instance.variant);
            if (out_opt->count() > 0) {
                write_file(out, j.dump(2) + "\n");
                std::cout << "sum_clustered=" << report.sum_clustered
                          << " global_cost=" << report.global_cost
                          << " ratio=" << rat_str(report.ratio)
                          << " solver_mode=" << solver_mode_str(report.solver_mode)
                          << " warnings=" << report.warnings.size() << "\n";
            } else {
                std::cout << j.dump(2) << "\n";
            }
            return 0;
        }

        if (sweep->parsed()) {
            std::vector<Rat> grid = parse_grid(sweep_grid);
            SweepParams params;
            params.n = sweep_n;
            params.m = sweep_m;
            SolveBudget budget;
            budget.max_items = default_max_items();
            std::vector<SweepRow> rows = sweep_beta(sweep_alg, grid, params, budget);
            write_file(sweep_out, sweep_csv(rows));
            if (sweep_json_opt->count() > 0)
                write_file(sweep_json_path, sweep_json(rows).dump(2) + "\n");
            long long errors = 0;
            for (const SweepRow& row : rows)
                if (!row.error.empty()) ++errors;
            std::cout << "rows=" << rows.size() << " errors=" << errors << " csv=" << sweep_out
                      << "\n";
            return 0;
        }

        if (verify->parsed()) {
            Instance instance = load_instance(read_file(ver_in));
            Packing packing = load_packing(read_file(ver_packing), instance);
            WeightFn fn = make_weight_fn(ver_weights, ver_t_opt, ver_t, ver_k_opt, ver_k,
                                         ver_beta_opt, ver_beta, ver_theta_opt, ver_theta);
            if ((ver_cap_opt->count() > 0) == (ver_floor_opt->count() > 0))
                throw std::invalid_argument("verify: pass exactly one of --cap or --floor");
            WeightCheckReport report =
                ver_cap_opt->count() > 0
                    ? check_opt_bin_weights(packing, fn, parse_rat(ver_cap), !ver_non_strict)
                    : check_alg_bin_weights(packing, fn, parse_rat(ver_floor), ver_exceptions);
            std::cout << "pass=" << (report.pass ? "true" : "false")
                      << " violations=" << report.violating_bins.size()
                      << " allowed=" << report.allowed_exceptions
                      << " bins=" << report.bin_weights.size() << "\n";
            if (ver_out_opt->count() > 0)
                write_file(ver_out, weight_report_to_json(report).dump(2) + "\n");
            return report.pass ? 0 : kExitClaim;
        }
    } catch (const ClaimMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitClaim;
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const Json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
