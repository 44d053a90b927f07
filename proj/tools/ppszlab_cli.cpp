// ppszlab command-line front end. JSON by default, CSV for tables.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ppszlab/audit.hpp"
#include "ppszlab/cct.hpp"
#include "ppszlab/dist.hpp"
#include "ppszlab/formula.hpp"
#include "ppszlab/gw.hpp"
#include "ppszlab/implication.hpp"
#include "ppszlab/ppsz.hpp"
#include "ppszlab/structure.hpp"

using namespace ppszlab;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::uint64_t seed = 1;
    std::size_t trials = 1000;
    int threads = 1;
    int w = 4;
    double epsilon = 0.1;
    std::string gamma = "uniform";
    double thr = kDefaultThr;
    std::string format;
    std::string out;
};

json config_of(const CLI::App* app) {
    json cfg = json::object();
    for (const CLI::App* a = app; a; a = a->get_parent()) {
        for (const CLI::Option* opt : a->get_options()) {
            std::string name = opt->get_single_name();
            if (name.empty() || name == "help" || cfg.contains(name)) continue;
            auto res = opt->results();
            if (res.empty()) {
                std::string def = opt->get_default_str();
                if (def.empty()) continue;
                cfg[name] = def;
            } else if (res.size() == 1) {
                cfg[name] = res[0];
            } else {
                cfg[name] = res;
            }
        }
    }
    return cfg;
}

class Output {
public:
    Output(const CLI::App* sub, const Common& c) : sub_(sub), c_(c) {}

    void json_result(const json& result) const {
        json j = {{"version", version()},
                  {"command", sub_->get_name()},
                  {"seed", c_.seed},
                  {"config", config_of(sub_)},
                  {"result", result}};
        emit(j.dump(2) + "\n");
    }
    // CSV with provenance in leading '#' lines
    void csv(const std::string& body) const {
        std::ostringstream os;
        os << "# ppszlab " << version() << " " << sub_->get_name() << " seed=" << c_.seed << "\n";
        os << "# config " << config_of(sub_).dump() << "\n";
        emit(os.str() + body);
    }
    void text(const std::string& header_prefix, const std::string& body) const {
        std::ostringstream os;
        os << header_prefix << "ppszlab " << version() << " " << sub_->get_name() << " seed=" << c_.seed << "\n";
        os << header_prefix << "config " << config_of(sub_).dump() << "\n";
        emit(os.str() + body);
    }

private:
    void emit(const std::string& s) const {
        if (c_.out.empty()) {
            std::cout << s;
            return;
        }
        std::ofstream f(c_.out);
        if (!f) throw UsageError("cannot write " + c_.out);
        f << s;
    }
    const CLI::App* sub_;
    const Common& c_;
};

CnfFormula load(const std::string& path) {
    if (!std::filesystem::exists(path)) throw UsageError("no such file: " + path);
    return read_dimacs_file(path);
}

std::unique_ptr<PlacementSampler> make_sampler(const Common& c) {
    if (c.gamma == "uniform") return std::make_unique<UniformSampler>();
    GammaSpec spec = gamma_by_name(c.gamma);
    if (min_univariate_density(spec, c.epsilon) < 0) throw UsageError("epsilon too large for gamma " + c.gamma);
    return std::make_unique<BiasedSampler>(spec, c.epsilon);
}

json estimate_json(const Estimate& e) { return {{"mean", e.mean}, {"stderr", e.stderr_}, {"trials", e.trials}}; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ppszlab: PPSZ analysis laboratory"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(version()));

    Common c;
    app.add_option("--seed", c.seed, "base RNG seed")->capture_default_str();
    app.add_option("--trials", c.trials, "Monte Carlo trials")->capture_default_str();
    app.add_option("--threads", c.threads, "worker threads (output does not depend on it)")->capture_default_str();
    app.add_option("--w", c.w, "implication width")->capture_default_str();
    app.add_option("--epsilon", c.epsilon, "bias strength")->capture_default_str();
    app.add_option("--gamma", c.gamma, "uniform or a gamma name: main, twocc, id01, pid01, twocc_irr, generalk")
        ->capture_default_str();
    app.add_option("--thr", c.thr, "label density threshold")->capture_default_str();
    app.add_option("--format", c.format, "json, csv, table or dot depending on the command");
    app.add_option("--out", c.out, "write to a file instead of stdout");

    // gen
    auto* gen = app.add_subcommand("gen", "generate unique-SAT k-CNF instances");
    int gen_n = 12, gen_k = 3, gen_count = 1;
    double gen_density = 5.0;
    std::string gen_dir;
    bool gen_sparse = false;
    gen->add_option("--n", gen_n)->capture_default_str();
    gen->add_option("--k", gen_k)->capture_default_str();
    gen->add_option("--density", gen_density, "clauses per variable before planting")->capture_default_str();
    gen->add_option("--count", gen_count)->capture_default_str();
    gen->add_option("--dir", gen_dir, "write inst_<i>.cnf and .json files here");
    gen->add_flag("--sparse", gen_sparse, "extra clauses get two or more positive literals (one critical clause per variable)");

    // solve
    auto* solve = app.add_subcommand("solve", "Monte Carlo PPSZ success probability");
    std::string file;
    solve->add_option("file", file, "DIMACS file")->required();

    // forced
    auto* forced_cmd = app.add_subcommand("forced", "per-variable Forced frequency over random orders");
    forced_cmd->add_option("file", file)->required();

    // imply
    auto* imply = app.add_subcommand("imply", "w-implication query");
    int imply_x = 1, imply_b = 1;
    bool imply_exhaustive = false;
    imply->add_option("file", file)->required();
    imply->add_option("--x", imply_x)->capture_default_str();
    imply->add_option("--b", imply_b)->check(CLI::Range(0, 1))->capture_default_str();
    imply->add_flag("--exhaustive", imply_exhaustive, "reference search over every subset");

    // cct
    auto* cct = app.add_subcommand("cct", "build a critical clause tree");
    int cct_x = 1, cct_h = 3;
    cct->add_option("file", file)->required();
    cct->add_option("--x", cct_x)->capture_default_str();
    cct->add_option("--height", cct_h)->capture_default_str();

    // cutprob
    auto* cutprob = app.add_subcommand("cutprob", "Monte Carlo cut probabilities");
    int cut_x = 1, cut_h = 3, cut_k = 0, cut_depth = 10;
    std::vector<double> cut_r{0.1, 0.25, 0.4};
    bool cut_weak = false, cut_rel = false;
    cutprob->add_option("file", file, "DIMACS file; omit with --complete-k");
    cutprob->add_option("--x", cut_x)->capture_default_str();
    cutprob->add_option("--height", cut_h)->capture_default_str();
    cutprob->add_option("--complete-k", cut_k, "use the complete (k-1)-ary tree instead of a formula");
    cutprob->add_option("--depth", cut_depth)->capture_default_str();
    cutprob->add_option("--r", cut_r)->capture_default_str();
    cutprob->add_flag("--weak", cut_weak);
    cutprob->add_flag("--root-relative", cut_rel);

    // gw
    auto* gwc = app.add_subcommand("gw", "Q_r, P_r, s_k tables (CSV)");
    int gw_k = 3, gw_grid = 101;
    gwc->add_option("--k", gw_k)->check(CLI::Range(3, 64))->capture_default_str();
    gwc->add_option("--grid", gw_grid)->check(CLI::Range(2, 1000000))->capture_default_str();

    // dist
    auto* dist = app.add_subcommand("dist", "sampling and KL reports for D_eps^gamma and D^G");
    std::string dist_shape = "none";
    int dist_t = 6;
    std::size_t dist_samples = 10000;
    double dist_rho = 0.1;
    dist->add_option("--shape", dist_shape)->check(CLI::IsMember({"none", "path", "cycle"}))->capture_default_str();
    dist->add_option("--t", dist_t, "edge count of the shape")->capture_default_str();
    dist->add_option("--samples", dist_samples)->capture_default_str();
    dist->add_option("--rho", dist_rho, "rho for gamma generalk")->capture_default_str();

    // structure
    auto* structure = app.add_subcommand("structure", "sibling graph / H / matching report");
    int st_height = 3, st_kprime = 3;
    structure->add_option("file", file)->required();
    structure->add_option("--height", st_height, "CCT height for label densities")->capture_default_str();
    structure->add_option("--kprime", st_kprime)->capture_default_str();

    // audit
    auto* auditc = app.add_subcommand("audit", "recompute and certify the analysis constants");
    bool audit_all = false, audit_list = false;
    std::vector<std::string> audit_ids;
    auditc->add_flag("--all", audit_all, "run every entry (default)");
    auditc->add_option("--id", audit_ids, "run only these entries");
    auditc->add_flag("--list", audit_list, "print entry ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        ImplyOptions iopt;
        iopt.w_cap = std::max(kDefaultWCap, c.w);

        if (gen->parsed()) {
            Output out(gen, c);
            json list = json::array();
            for (int i = 0; i < gen_count; ++i) {
                auto inst = generate_unique_instance(gen_n, gen_k, gen_density, trial_seed(c.seed, i), kEnumerationCap,
                                                     gen_sparse ? GenMode::SparseCritical : GenMode::Mixed);
                inst.formula.comments.push_back("ppszlab " + std::string(version()) + " gen seed=" +
                                                std::to_string(inst.seed));
                if (!gen_dir.empty()) {
                    std::filesystem::create_directories(gen_dir);
                    std::string base = gen_dir + "/inst_" + std::to_string(i);
                    std::ofstream(base + ".cnf") << write_dimacs(inst.formula);
                    std::ofstream(base + ".json") << inst.sidecar_json() << "\n";
                    list.push_back(base + ".cnf");
                } else if (gen_count == 1 && c.format != "json") {
                    out.text("c ", write_dimacs(inst.formula));
                    return 0;
                } else {
                    list.push_back({{"dimacs", write_dimacs(inst.formula)}, {"sidecar", json::parse(inst.sidecar_json())}});
                }
            }
            out.json_result(list);
        } else if (solve->parsed()) {
            auto f = load(file);
            auto sampler = make_sampler(c);
            McOptions mc{c.trials, c.seed, c.threads};
            auto est = success_probability_mc(f, c.w, *sampler, mc, iopt);
            Output(solve, c).json_result({{"n", f.n},
                                          {"sampler", sampler->name()},
                                          {"success", estimate_json(est.success)},
                                          {"forced_mean", est.forced_mean}});
        } else if (forced_cmd->parsed()) {
            auto f = load(file);
            std::vector<std::vector<double>> hits(c.trials, std::vector<double>(f.n + 1, 0));
            std::vector<VarId> vars(f.n);
            for (int i = 0; i < f.n; ++i) vars[i] = i + 1;
            auto sampler = make_sampler(c);
            const auto labels = var_labels(f.n);
            parallel_for(c.trials, c.threads, [&](std::size_t t) {
                Rng rng = trial_rng(c.seed, t);
                Order order = permutation_from_placement(sampler->sample(labels, rng), vars);
                for (VarId x = 1; x <= f.n; ++x) hits[t][x] = forced(f, order, c.w, x, iopt) ? 1 : 0;
            });
            json per = json::array();
            for (VarId x = 1; x <= f.n; ++x) {
                std::vector<double> col(c.trials);
                for (std::size_t t = 0; t < c.trials; ++t) col[t] = hits[t][x];
                per.push_back({{"var", x}, {"forced", estimate_json(summarize(col))}});
            }
            Output(forced_cmd, c).json_result({{"n", f.n}, {"sampler", sampler->name()}, {"variables", per}});
        } else if (imply->parsed()) {
            auto f = load(file);
            if (imply_x < 1 || imply_x > f.n) throw UsageError("--x out of range");
            if (imply_exhaustive) iopt.search = ImplySearch::Exhaustive;
            std::vector<int> witness;
            bool yes = w_implies_witness(f, c.w, imply_x, imply_b, &witness, iopt);
            json wj = json::array();
            for (int idx : witness) wj.push_back(f.clauses[idx].to_string());
            Output(imply, c).json_result({{"implies", yes}, {"witness", wj}});
        } else if (cct->parsed()) {
            auto f = load(file);
            if (cct_x < 1 || cct_x > f.n) throw UsageError("--x out of range");
            auto t = build_cct(f, cct_x, cct_h);
            mark_canonical(t, f, twocc_set(f, TwoCCMode::FTilde));
            if (c.format == "dot")
                Output(cct, c).text("// ", to_dot(t));
            else
                Output(cct, c).json_result(json::parse(to_json_dump(t)));
        } else if (cutprob->parsed()) {
            LabeledTree t;
            if (cut_k > 0) {
                t = complete_tree(cut_k, cut_depth);
            } else {
                if (file.empty()) throw UsageError("cutprob needs a file or --complete-k");
                auto f = load(file);
                if (cut_x < 1 || cut_x > f.n) throw UsageError("--x out of range");
                t = to_labeled(build_cct(f, cut_x, cut_h));
            }
            auto sampler = make_sampler(c);
            CutOptions opt;
            opt.weak = cut_weak;
            opt.root_relative = cut_rel;
            opt.trials = c.trials;
            opt.seed = c.seed;
            opt.threads = c.threads;
            json rows = json::array();
            for (double r : cut_r) {
                if (!(r >= 0 && r <= 1)) throw UsageError("--r must lie in [0,1]");
                json row = {{"r", r}, {"cut", estimate_json(cut_probability_mc(t, *sampler, r, opt))}};
                if (cut_k > 0) row["q"] = gw::q(cut_k, r);
                rows.push_back(row);
            }
            Output(cutprob, c).json_result({{"tree_nodes", t.size()}, {"sampler", sampler->name()}, {"rows", rows}});
        } else if (gwc->parsed()) {
            std::ostringstream os;
            os.precision(12);
            os << "r,Q,P\n";
            for (int i = 0; i < gw_grid; ++i) {
                double r = static_cast<double>(i) / (gw_grid - 1);
                os << r << "," << gw::q(gw_k, r) << "," << gw::p(gw_k, r) << "\n";
            }
            os << "# s_" << gw_k << "=" << gw::s(gw_k) << "\n";
            if (c.format == "json") {
                json rows = json::array();
                for (int i = 0; i < gw_grid; ++i) {
                    double r = static_cast<double>(i) / (gw_grid - 1);
                    rows.push_back({{"r", r}, {"Q", gw::q(gw_k, r)}, {"P", gw::p(gw_k, r)}});
                }
                Output(gwc, c).json_result({{"k", gw_k}, {"s", gw::s(gw_k)}, {"rows", rows}});
            } else {
                Output(gwc, c).csv(os.str());
            }
        } else if (dist->parsed()) {
            std::string gname = c.gamma == "uniform" ? "main" : c.gamma;
            GammaSpec spec = gamma_by_name(gname, dist_rho);
            if (min_univariate_density(spec, c.epsilon) < 0) throw UsageError("epsilon too large for this gamma");
            auto m = moments(spec);
            auto kl = kl_univariate(spec, c.epsilon);
            json res = {{"gamma", spec.name},
                        {"phi_min", spec.phi_min},
                        {"phi_max", spec.phi_max},
                        {"moments", {m.m1, m.m2, m.m3, m.m4}},
                        {"kl_univariate_bits", kl.numeric},
                        {"kl_univariate_bound", kl.bound}};
            std::vector<double> xs(dist_samples);
            parallel_for(dist_samples, c.threads, [&](std::size_t i) {
                Rng rng = trial_rng(c.seed, i);
                xs[i] = sample_univariate(spec, c.epsilon, rng);
            });
            std::vector<double> below(dist_samples);
            for (std::size_t i = 0; i < dist_samples; ++i) below[i] = xs[i] < 0.3 ? 1 : 0;
            res["pr_below_0_3"] = estimate_json(summarize(below));
            res["pr_below_0_3_exact"] = 0.3 + c.epsilon * spec.gamma(0.3);
            if (dist_shape != "none") {
                GraphShape g = dist_shape == "path" ? GraphShape::path(dist_t) : GraphShape::cycle(dist_t);
                if (min_graph_density(g, spec, c.epsilon) < 0) throw UsageError("D^G density goes negative");
                KlGraphOptions ko;
                ko.seed = c.seed;
                ko.trials = c.trials;
                res["graph"] = {{"shape", dist_shape},
                                {"edges", g.edge_count()},
                                {"kl_moment_bits", kl_graph(g, spec, c.epsilon, ko)},
                                {"min_density", min_graph_density(g, spec, c.epsilon)}};
            }
            Output(dist, c).json_result(res);
        } else if (structure->parsed()) {
            auto f = load(file);
            Output(structure, c).json_result(json::parse(structure_report_json(f, c.thr, st_height, st_kprime)));
        } else if (auditc->parsed()) {
            if (audit_list) {
                std::ostringstream os;
                for (const auto& id : audit::entry_ids()) os << id << "\n";
                std::cout << os.str();
                return 0;
            }
            if (audit_all) audit_ids.clear();
            auto rep = audit::run_audit(audit_ids);
            if (c.format == "table")
                Output(auditc, c).text("# ", rep.to_table());
            else
                Output(auditc, c).json_result(json::parse(rep.to_json()));
            return rep.ok() ? 0 : 1;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
