// cbpmde command-line front end: simulation, estimation, and the robustness /
// efficiency tables as deterministic CSV/JSON artifacts.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cbpmde/contamination.hpp"
#include "cbpmde/errors.hpp"
#include "cbpmde/family.hpp"
#include "cbpmde/manifest.hpp"
#include "cbpmde/mc.hpp"
#include "cbpmde/mde.hpp"
#include "cbpmde/npmle.hpp"
#include "cbpmde/robust.hpp"
#include "cbpmde/tree.hpp"
#include "cbpmde/tree_io.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using namespace cbpmde;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitInestimable = 4;

// full round-trip decimal formatting so reruns diff clean
std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << bytes;
    if (!out) throw IoError("short write to " + path);
}

std::string resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("CBPMDE_OUT_DIR"); env && *env) return env;
    return ".";
}

std::vector<DisparityKind> parse_disparities(const std::string& name) {
    if (name == "all") return {DisparityKind::ld, DisparityKind::hd, DisparityKind::ned};
    if (name == "ld") return {DisparityKind::ld};
    if (name == "hd") return {DisparityKind::hd};
    if (name == "ned") return {DisparityKind::ned};
    throw CLI::ValidationError("--disparity must be one of ld|hd|ned|all");
}

// ---- experiment config -----------------------------------------------------

ExperimentConfig default_grid_config() {
    ExperimentConfig config;
    config.alphas = {0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50};
    config.l_values.clear();
    for (std::int64_t L = 0; L <= 25; ++L) config.l_values.push_back(L);
    return config;
}

const std::vector<std::string> kConfigKeys = {
    "theta0", "lambda", "z0", "replications", "seed",
    "generations", "alphas", "l_values", "disparities"};

void apply_config_file(const std::string& path, ExperimentConfig& config) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw CLI::ValidationError(std::string("config parse error: ") + e.what());
    }
    std::vector<std::string> unknown;
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(kConfigKeys.begin(), kConfigKeys.end(), key) == kConfigKeys.end())
            unknown.push_back(key);
    }
    if (!unknown.empty()) {
        std::string msg = "unknown config keys:";
        for (const auto& k : unknown) msg += " " + k;
        throw CLI::ValidationError(msg);
    }
    if (j.contains("theta0")) config.theta0 = j["theta0"].get<double>();
    if (j.contains("lambda")) config.lambda = j["lambda"].get<double>();
    if (j.contains("z0")) config.z0 = j["z0"].get<std::int64_t>();
    if (j.contains("replications")) config.replications = j["replications"].get<int>();
    if (j.contains("seed")) config.seed_base = j["seed"].get<std::uint64_t>();
    if (j.contains("generations")) config.n_max = j["generations"].get<int>();
    if (j.contains("alphas")) config.alphas = j["alphas"].get<std::vector<double>>();
    if (j.contains("l_values"))
        config.l_values = j["l_values"].get<std::vector<std::int64_t>>();
    if (j.contains("disparities")) {
        config.disparities.clear();
        for (const auto& name : j["disparities"]) {
            const auto kinds = parse_disparities(name.get<std::string>());
            config.disparities.insert(config.disparities.end(), kinds.begin(), kinds.end());
        }
    }
}

ordered_json config_echo(const ExperimentConfig& config) {
    ordered_json j;
    j["theta0"] = config.theta0;
    j["lambda"] = config.lambda;
    j["z0"] = config.z0;
    j["generations"] = config.n_max;
    j["replications"] = config.replications;
    j["seed"] = config.seed_base;
    j["alphas"] = config.alphas;
    j["l_values"] = config.l_values;
    auto names = ordered_json::array();
    for (const DisparityKind k : config.disparities) names.push_back(to_string(k));
    j["disparities"] = names;
    return j;
}

// ---- simulate ---------------------------------------------------------------

struct SimulateArgs {
    double theta0 = 7.0;
    double lambda = 0.3;
    std::int64_t z0 = 1;
    int gens = 10;
    std::uint64_t seed = 1;
    std::string control = "poisson";
    std::string offspring = "poisson";  // "point" pins every litter at round(theta0)
    std::string out;
};

FamilyTree simulate_from_args(const SimulateArgs& args) {
    const ControlSpec control{args.control == "deterministic" ? ControlLaw::deterministic
                                                              : ControlLaw::poisson_rate,
                              args.lambda};
    if (args.offspring == "point") {
        const auto k = static_cast<std::size_t>(std::llround(args.theta0));
        return simulate(Pmf::point_mass(k), control, args.z0, args.gens, args.seed);
    }
    const PoissonFamily family;
    return simulate(family, args.theta0, control, args.z0, args.gens, args.seed);
}

ordered_json simulate_echo(const SimulateArgs& args) {
    ordered_json j;
    j["theta0"] = args.theta0;
    j["lambda"] = args.lambda;
    j["z0"] = args.z0;
    j["generations"] = args.gens;
    j["seed"] = args.seed;
    j["control"] = args.control;
    return j;
}

int cmd_simulate(const SimulateArgs& args) {
    const FamilyTree tree = simulate_from_args(args);
    write_file(args.out, tree_to_csv(tree));
    RunManifest manifest("simulate", simulate_echo(args).dump(), args.seed);
    manifest.add_output(args.out);
    manifest.write(args.out + ".manifest.json");
    return kExitOk;
}

// ---- estimate ---------------------------------------------------------------

struct EstimateArgs {
    std::string tree_path;
    std::string disparity = "all";
    std::string out;
    SimulateArgs sim;
};

int cmd_estimate(const EstimateArgs& args) {
    FamilyTree tree;
    if (!args.tree_path.empty()) {
        std::ifstream in(args.tree_path);
        if (!in) throw IoError("cannot read tree file " + args.tree_path);
        tree = parse_tree_csv(in);
    } else {
        tree = simulate_from_args(args.sim);
    }

    const PoissonFamily family;
    ordered_json records = ordered_json::array();
    try {
        for (const DisparityKind kind : parse_disparities(args.disparity)) {
            const MdeResult r = mde_from_tree(DisparitySpec::get(kind), family, tree);
            ordered_json rec;
            rec["disparity"] = to_string(kind);
            rec["theta_hat"] = r.theta_hat;
            rec["value"] = r.value;
            if (r.stationarity)
                rec["stationarity"] = *r.stationarity;
            else
                rec["stationarity"] = nullptr;
            rec["iterations"] = r.iterations;
            rec["bracket"] = r.bracket;
            rec["near_tie"] = r.near_tie;
            records.push_back(rec);
        }
    } catch (const NoProgenitorsError& e) {
        ordered_json err;
        err["error"] = "no_progenitors";
        err["message"] = e.what();
        std::cout << err.dump(2) << "\n";
        return kExitInestimable;
    }

    ordered_json doc;
    doc["estimates"] = records;
    const std::string body = doc.dump(2) + "\n";
    if (args.out.empty()) {
        std::cout << body;
    } else {
        write_file(args.out, body);
        ordered_json echo;
        echo["tree"] = args.tree_path;
        echo["disparity"] = args.disparity;
        RunManifest manifest("estimate", echo.dump(), args.sim.seed);
        manifest.add_output(args.out);
        manifest.write(args.out + ".manifest.json");
    }
    return kExitOk;
}

// ---- influence ----------------------------------------------------------------

// deterministic command; the manifest's seed field is fixed at 0
int cmd_influence(const std::string& out_dir, double theta, std::vector<double> alphas,
                  std::int64_t l_max, const std::string& disparity) {
    if (alphas.empty()) alphas = {0.05};
    const PoissonFamily family;
    std::vector<std::int64_t> l_values;
    for (std::int64_t L = 0; L <= l_max; ++L) l_values.push_back(L);

    std::string csv = "alpha,disparity,L,curve,limit_curve\n";
    for (const double alpha : alphas) {
        for (const DisparityKind kind : parse_disparities(disparity)) {
            const InfluenceReport rep =
                alpha_influence(DisparitySpec::get(kind), family, theta, alpha, l_values);
            for (std::size_t i = 0; i < rep.L_values.size(); ++i) {
                csv += fmt17(alpha);
                csv += ',';
                csv += to_string(kind);
                csv += ',' + std::to_string(rep.L_values[i]) + ',' + fmt17(rep.curve[i]) +
                       ',' + fmt17(rep.limit_curve[i]) + '\n';
            }
        }
    }

    const std::string path = out_dir + "/influence.csv";
    write_file(path, csv);
    ordered_json echo;
    echo["theta"] = theta;
    echo["alphas"] = alphas;
    echo["l_max"] = l_max;
    echo["disparity"] = disparity;
    RunManifest manifest("influence", echo.dump(), 0);
    manifest.add_output(path);
    manifest.write(out_dir + "/influence.manifest.json");
    return kExitOk;
}

// ---- bias tables ---------------------------------------------------------------

int cmd_bias_tables(const std::string& out_dir) {
    const PoissonFamily family;
    struct Table {
        std::int64_t L;
        std::vector<double> alphas;
    };
    // inlier grids of the reference potential-bias tables
    const std::vector<Table> tables = {
        {0, {-0.0001, -0.0002, -0.0003, -0.0004, -0.0005, -0.0006, -0.0007, -0.0008,
             -0.0009}},
        {8, {-0.01, -0.02, -0.03, -0.04, -0.05, -0.06, -0.07, -0.08, -0.09}},
        {20, {-0.0000075, -0.0000100, -0.0000125, -0.0000150, -0.0000175, -0.0000200,
              -0.0000225, -0.0000250, -0.0000275}},
    };

    RunManifest manifest("bias-tables", "{}", 0);
    for (const Table& table : tables) {
        std::string csv = "alpha,HD_over_LD,NED_over_LD\n";
        for (const double alpha : table.alphas) {
            const double dl =
                potential_bias(DisparitySpec::likelihood(), family, 7.0, alpha, table.L);
            const double dh =
                potential_bias(DisparitySpec::hellinger(), family, 7.0, alpha, table.L);
            const double dn = potential_bias(DisparitySpec::negative_exponential(), family,
                                             7.0, alpha, table.L);
            csv += fmt17(alpha) + ',' + fmt17(dh / dl) + ',' + fmt17(dn / dl) + '\n';
        }
        const std::string path = out_dir + "/bias_table_L" + std::to_string(table.L) + ".csv";
        write_file(path, csv);
        manifest.add_output(path);
    }
    manifest.write(out_dir + "/bias_tables.manifest.json");
    return kExitOk;
}

// ---- grid & efficiency -----------------------------------------------------------

int cmd_grid(const ExperimentConfig& config, const std::string& out_dir) {
    const PoissonFamily family;
    const ReplicationSet set = run_experiment(config, family);
    const auto cells = grid_report(set);

    std::string csv =
        "alpha,L,tau_m,horizon,survived,extinct,inestimable";
    for (const DisparityKind k : config.disparities) {
        const std::string n{to_string(k)};
        csv += ",mean_" + n + ",mse_" + n + ",count_" + n;
    }
    csv += ",best\n";

    const auto emit_row = [&](double alpha, const std::string& L, double tau_m, int horizon,
                              std::size_t survived, std::size_t extinct,
                              std::size_t inestimable,
                              const std::vector<GridMethodStats>& methods,
                              std::optional<DisparityKind> best) {
        csv += fmt17(alpha) + ',' + L + ',' + fmt17(tau_m) + ',' + std::to_string(horizon) +
               ',' + std::to_string(survived) + ',' + std::to_string(extinct) + ',' +
               std::to_string(inestimable);
        for (const GridMethodStats& m : methods) {
            if (m.count > 0)
                csv += ',' + fmt17(m.mean) + ',' + fmt17(m.mse) + ',' +
                       std::to_string(m.count);
            else
                csv += ",nan,nan,0";
        }
        csv += ',';
        csv += best ? to_string(*best) : "none";
        csv += '\n';
    };

    // uncontaminated row from the baseline trajectory at the final generation
    {
        std::size_t survived = 0, extinct = 0, inestimable = 0;
        for (const BaselineRun& run : set.baseline) {
            switch (run.status) {
                case ReplicationStatus::survived: ++survived; break;
                case ReplicationStatus::extinct: ++extinct; break;
                case ReplicationStatus::inestimable: ++inestimable; break;
            }
        }
        std::vector<GridMethodStats> methods;
        std::optional<DisparityKind> best;
        double best_mse = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < config.disparities.size(); ++i) {
            GridMethodStats m;
            m.kind = config.disparities[i];
            double sum = 0.0, sq = 0.0;
            for (const BaselineRun& run : set.baseline) {
                if (run.status != ReplicationStatus::survived) continue;
                for (const TrajectoryPoint& pt : run.trajectory) {
                    if (pt.generation != config.n_max) continue;
                    ++m.count;
                    sum += pt.theta_hat[i];
                    sq += (pt.theta_hat[i] - config.theta0) * (pt.theta_hat[i] - config.theta0);
                }
            }
            if (m.count > 0) {
                m.mean = sum / static_cast<double>(m.count);
                m.mse = sq / static_cast<double>(m.count);
                if (m.mse < best_mse) { best_mse = m.mse; best = m.kind; }
            }
            methods.push_back(m);
        }
        emit_row(0.0, "none", config.theta0 * config.lambda, config.n_max, survived, extinct,
                 inestimable, methods, best);
    }

    for (const GridCellReport& cell : cells)
        emit_row(cell.alpha, std::to_string(cell.L), cell.tau_m, cell.horizon, cell.survived,
                 cell.extinct, cell.inestimable, cell.methods, cell.best);

    const std::string path = out_dir + "/grid.csv";
    write_file(path, csv);
    RunManifest manifest("grid", config_echo(config).dump(), config.seed_base);
    manifest.add_output(path);
    manifest.write(out_dir + "/grid.manifest.json");
    return kExitOk;
}

int cmd_efficiency(ExperimentConfig config, const std::string& out_dir) {
    config.alphas.clear();  // efficiency series needs only the uncontaminated cell
    config.l_values.clear();
    const PoissonFamily family;
    const ReplicationSet set = run_experiment(config, family);

    std::string csv = "generation,HD_over_NED,LD_over_HD,LD_over_NED\n";
    for (int n = 1; n <= config.n_max; ++n) {
        const auto ratio = [&](DisparityKind a, DisparityKind b) -> std::string {
            try {
                return fmt17(relative_efficiency(set, a, b, n));
            } catch (const EmptySampleError&) {
                return "nan";
            } catch (const DegenerateRatioError&) {
                return "nan";
            }
        };
        csv += std::to_string(n) + ',' + ratio(DisparityKind::hd, DisparityKind::ned) + ',' +
               ratio(DisparityKind::ld, DisparityKind::hd) + ',' +
               ratio(DisparityKind::ld, DisparityKind::ned) + '\n';
    }

    const std::string path = out_dir + "/efficiency.csv";
    write_file(path, csv);
    RunManifest manifest("efficiency", config_echo(config).dump(), config.seed_base);
    manifest.add_output(path);
    manifest.write(out_dir + "/efficiency.manifest.json");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimum disparity estimation for controlled branching processes"};
    app.require_subcommand(1);

    // simulate
    SimulateArgs sim;
    CLI::App* c_sim = app.add_subcommand("simulate", "simulate one family tree to CSV");
    c_sim->add_option("--theta0", sim.theta0, "offspring parameter");
    c_sim->add_option("--lambda", sim.lambda, "control rate");
    c_sim->add_option("--z0", sim.z0, "initial population");
    c_sim->add_option("--gens", sim.gens, "generations to simulate");
    c_sim->add_option("--seed", sim.seed, "rng seed");
    c_sim->add_option("--control", sim.control, "control law: poisson|deterministic")
        ->check(CLI::IsMember({"poisson", "deterministic"}));
    c_sim->add_option("--offspring", sim.offspring, "offspring law: poisson|point")
        ->check(CLI::IsMember({"poisson", "point"}));
    c_sim->add_option("--out", sim.out, "output CSV path")->required();

    // estimate
    EstimateArgs est;
    CLI::App* c_est = app.add_subcommand("estimate", "estimate theta from a family tree");
    c_est->add_option("--tree", est.tree_path, "tree CSV (from simulate)");
    c_est->add_option("--disparity", est.disparity, "ld|hd|ned|all")
        ->check(CLI::IsMember({"ld", "hd", "ned", "all"}));
    c_est->add_option("--out", est.out, "output JSON path (default stdout)");
    c_est->add_option("--theta0", est.sim.theta0, "simulation theta0 when no --tree");
    c_est->add_option("--lambda", est.sim.lambda, "simulation lambda");
    c_est->add_option("--z0", est.sim.z0, "simulation z0");
    c_est->add_option("--gens", est.sim.gens, "simulation generations");
    c_est->add_option("--seed", est.sim.seed, "simulation seed");
    c_est->add_option("--control", est.sim.control, "simulation control law")
        ->check(CLI::IsMember({"poisson", "deterministic"}));
    c_est->add_option("--offspring", est.sim.offspring, "simulation offspring law")
        ->check(CLI::IsMember({"poisson", "point"}));

    // influence
    std::string out_dir_flag;
    double inf_theta = 7.0;
    std::vector<double> inf_alphas;
    std::int64_t inf_lmax = 25;
    std::string inf_disparity = "all";
    CLI::App* c_inf = app.add_subcommand("influence", "alpha-influence curves to CSV");
    c_inf->add_option("--theta", inf_theta, "model parameter");
    c_inf->add_option("--alpha", inf_alphas, "contamination levels (repeatable)");
    c_inf->add_option("--lmax", inf_lmax, "curve over L = 0..lmax");
    c_inf->add_option("--disparity", inf_disparity, "ld|hd|ned|all")
        ->check(CLI::IsMember({"ld", "hd", "ned", "all"}));
    c_inf->add_option("--out-dir", out_dir_flag, "output directory (or CBPMDE_OUT_DIR)");

    // bias-tables
    CLI::App* c_bias =
        app.add_subcommand("bias-tables", "inlier potential-bias ratio tables to CSV");
    c_bias->add_option("--out-dir", out_dir_flag, "output directory (or CBPMDE_OUT_DIR)");

    // grid
    std::string config_path;
    ExperimentConfig grid_config = default_grid_config();
    CLI::App* c_grid =
        app.add_subcommand("grid", "Monte Carlo contamination grid report to CSV");
    c_grid->add_option("--config", config_path, "JSON experiment config");
    c_grid->add_option("--replications", grid_config.replications, "replications per cell");
    c_grid->add_option("--seed", grid_config.seed_base, "seed base");
    c_grid->add_option("--out-dir", out_dir_flag, "output directory (or CBPMDE_OUT_DIR)");

    // efficiency
    ExperimentConfig eff_config;
    std::string eff_config_path;
    CLI::App* c_eff = app.add_subcommand(
        "efficiency", "per-generation MSE-ratio series for the uncontaminated model");
    c_eff->add_option("--config", eff_config_path, "JSON experiment config");
    c_eff->add_option("--replications", eff_config.replications, "replications");
    c_eff->add_option("--seed", eff_config.seed_base, "seed base");
    c_eff->add_option("--gens", eff_config.n_max, "generations");
    c_eff->add_option("--out-dir", out_dir_flag, "output directory (or CBPMDE_OUT_DIR)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (c_sim->parsed()) return cmd_simulate(sim);
        if (c_est->parsed()) return cmd_estimate(est);
        const std::string out_dir = resolve_out_dir(out_dir_flag);
        std::filesystem::create_directories(out_dir);
        if (c_inf->parsed())
            return cmd_influence(out_dir, inf_theta, inf_alphas, inf_lmax, inf_disparity);
        if (c_bias->parsed()) return cmd_bias_tables(out_dir);
        if (c_grid->parsed()) {
            if (!config_path.empty()) apply_config_file(config_path, grid_config);
            return cmd_grid(grid_config, out_dir);
        }
        if (c_eff->parsed()) {
            if (!eff_config_path.empty()) apply_config_file(eff_config_path, eff_config);
            return cmd_efficiency(eff_config, out_dir);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const TreeParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
