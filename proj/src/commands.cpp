#include "hexrelay/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "hexrelay/validation.hpp"

namespace hexrelay {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void ensure_dir(const std::string& dir) { std::filesystem::create_directories(dir); }

std::ofstream open_out(const std::string& dir, const std::string& name,
                       const ExperimentConfig& config, bool with_header = true) {
    ensure_dir(dir);
    std::ofstream out(dir + "/" + name, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + dir + "/" + name);
    if (with_header) out << "# config: " << config.to_json().dump() << "\n";
    return out;
}

void write_json(const std::string& dir, const std::string& name, const json& j) {
    ensure_dir(dir);
    std::ofstream out(dir + "/" + name, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + dir + "/" + name);
    out << j.dump(2) << "\n";
}

double to_db(double lin) { return 10.0 * std::log10(lin); }

std::vector<double> sinr_db_of(const std::vector<SinrSample>& field, bool relay_served) {
    std::vector<double> out;
    for (const auto& s : field) {
        if (s.excluded()) continue;
        const bool is_relay = s.server.kind == NodeRef::Kind::Relay;
        if (is_relay == relay_served) out.push_back(to_db(s.gamma));
    }
    return out;
}

void write_cdf_csv(const std::string& dir, const std::string& name,
                   const ExperimentConfig& config, std::vector<double> values) {
    auto out = open_out(dir, name, config);
    out << "sinr_db,fraction\n";
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        out << fmt(values[i]) << "," << fmt((static_cast<double>(i) + 1.0) / n) << "\n";
}

// Search space restricted to one relay count when fix_n >= 0.
SearchSpace make_space(const ExperimentConfig& config) {
    SearchSpace space = SearchSpace::paper_default();
    if (config.fix_n >= 0) space.n_values = {config.fix_n};
    return space;
}

struct StateEval {
    RelayState state;
    NodeCapacities caps;
    double tau_used = 0.0;
    double c_cell = 0.0;  // bits/s
};

// Shared evaluation context for the optimizer commands.
struct SearchContext {
    const ExperimentConfig& config;
    CellGrid grid;
    UESampleSet samples;
    CapacityPipeline pipeline;
    std::optional<FluidCapacityEvaluator> fluid;
    double c_cell0;

    explicit SearchContext(const ExperimentConfig& cfg)
        : config(cfg),
          grid(cfg.make_grid()),
          samples(cfg.make_samples(grid)),
          pipeline(grid, cfg.propagation, samples, cfg.link_adaptation) {
        if (cfg.backend == Backend::Fluid)
            fluid.emplace(grid, cfg.propagation, samples, cfg.link_adaptation);
        c_cell0 = cfg.backend == Backend::Fluid ? fluid->baseline_capacity()
                                                : pipeline.baseline_capacity(Backend::Exact);
    }

    StateEval evaluate(const SearchSpace& space, const RelayState& s) const {
        StateEval ev;
        ev.state = s;
        const RelayLayout layout = to_layout(space, s, grid.Rc());
        if (config.backend == Backend::Fluid) {
            ev.caps = fluid->node_caps(layout);
        } else {
            const auto field = pipeline.sinr_field(layout, Backend::Exact);
            ev.caps = node_capacities(field, layout.n, config.link_adaptation,
                                      config.propagation.bandwidth_hz);
        }
        double backhaul_gamma = 0.0;
        if (config.tau.policy == TauSpec::Policy::Backhaul && config.tau.cb_from_sinr &&
            layout.n > 0)
            backhaul_gamma = pipeline.backhaul_sinr(layout, config.backend);
        ev.tau_used = resolve_tau_value(config.tau, ev.caps, c_cell0, config.link_adaptation,
                                        config.propagation.bandwidth_hz, backhaul_gamma);
        ev.c_cell = cell_capacity(ev.caps.c_enb, ev.caps.c_rn, ev.tau_used);
        return ev;
    }

    // Energy in bits/s/Hz so the paper's temperature scale applies.
    EnergyFn energy(const SearchSpace& space) const {
        return [this, &space](const RelayState& s) {
            return -evaluate(space, s).c_cell / config.propagation.bandwidth_hz;
        };
    }
};

json state_json(const SearchSpace& space, const StateEval& ev, double w_hz) {
    const RelayState& s = ev.state;
    return json{{"n", space.n_values[static_cast<std::size_t>(s.in)]},
                {"RR_over_Rc", space.rr_over_rc[static_cast<std::size_t>(s.ir)]},
                {"phi_rad", space.phi_rad[static_cast<std::size_t>(s.iphi)]},
                {"PR_dbm", space.pr_dbm[static_cast<std::size_t>(s.ip)]},
                {"cell_capacity_bps", ev.c_cell},
                {"cell_capacity_bps_hz", ev.c_cell / w_hz},
                {"tau_used", ev.tau_used}};
}

struct RunResult {
    StateEval best;
};

RunResult run_exhaustive(const ExperimentConfig& config) {
    const SearchContext ctx(config);
    const SearchSpace space = make_space(config);
    space.validate();

    std::vector<StateEval> rows;
    rows.reserve(space.size());
    for (const RelayState& s : enumerate_states(space)) rows.push_back(ctx.evaluate(space, s));

    std::stable_sort(rows.begin(), rows.end(),
                     [](const StateEval& a, const StateEval& b) { return a.c_cell > b.c_cell; });

    auto out = open_out(config.out_dir, "states.csv", config);
    out << "n,RR_over_Rc,phi_rad,PR_dbm,cell_capacity_bps,tau_used\n";
    for (const auto& r : rows) {
        out << space.n_values[static_cast<std::size_t>(r.state.in)] << ","
            << fmt(space.rr_over_rc[static_cast<std::size_t>(r.state.ir)]) << ","
            << fmt(space.phi_rad[static_cast<std::size_t>(r.state.iphi)]) << ","
            << fmt(space.pr_dbm[static_cast<std::size_t>(r.state.ip)]) << ","
            << fmt(r.c_cell) << "," << fmt(r.tau_used) << "\n";
    }

    std::vector<json> ties;
    for (const auto& r : rows) {
        if (r.c_cell < rows.front().c_cell) break;
        ties.push_back(state_json(space, r, config.propagation.bandwidth_hz));
    }
    write_json(config.out_dir, "summary.json",
               json{{"config", config.to_json()},
                    {"best", state_json(space, rows.front(), config.propagation.bandwidth_hz)},
                    {"ties", ties},
                    {"states", rows.size()},
                    {"c_cell0_bps", ctx.c_cell0}});
    return {rows.front()};
}

RunResult run_optimize(const ExperimentConfig& config) {
    const SearchContext ctx(config);
    const SearchSpace space = make_space(config);
    space.validate();

    MemoizedEnergy memo(space, ctx.energy(space));
    const SaResult res =
        sa_search(space, config.annealing, [&memo](const RelayState& s) { return memo(s); });

    auto out = open_out(config.out_dir, "trace.csv", config);
    out << "iter,temperature,energy,best_energy\n";
    for (const auto& t : res.trace)
        out << t.iter << "," << fmt(t.temperature) << "," << fmt(t.energy) << ","
            << fmt(t.best_energy) << "\n";

    const StateEval best = ctx.evaluate(space, res.best);
    write_json(config.out_dir, "best.json",
               json{{"config", config.to_json()},
                    {"best", state_json(space, best, config.propagation.bandwidth_hz)},
                    {"best_energy_bps_hz", res.best_energy},
                    {"iterations", config.annealing.iterations},
                    {"evaluations", memo.evaluations()},
                    {"c_cell0_bps", ctx.c_cell0}});
    return {best};
}

}  // namespace

int cmd_evaluate(const ExperimentConfig& config) {
    const CellGrid grid = config.make_grid();
    const UESampleSet samples = config.make_samples(grid);
    const CapacityPipeline pipeline(grid, config.propagation, samples, config.link_adaptation);
    const RelayLayout layout = config.make_layout();

    const auto field = pipeline.sinr_field(layout, config.backend);
    const auto caps = node_capacities(field, layout.n, config.link_adaptation,
                                      config.propagation.bandwidth_hz);
    const double tau_used = pipeline.resolve_tau(config.tau, caps, layout, config.backend);
    const double c_cell = cell_capacity(caps.c_enb, caps.c_rn, tau_used);
    const double c_cell0 = pipeline.baseline_capacity(config.backend);
    const double w = config.propagation.bandwidth_hz;

    json cap{{"c_enb_bps", caps.c_enb},
             {"c_rn_bps", caps.c_rn},
             {"c_cell_bps", c_cell},
             {"c_cell_bps_hz", c_cell / w},
             {"c_cell0_bps", c_cell0},
             {"c_cell0_bps_hz", c_cell0 / w},
             {"tau_used", tau_used},
             {"p_enb", caps.p_enb},
             {"p_rn", caps.p_rn},
             {"excluded_fraction", caps.excluded_fraction}};
    if (layout.n > 0) {
        cap["tau_star"] = tau_star(c_cell0, caps.c_enb, caps.c_rn);
        cap["tau_backhaul"] = tau_backhaul(caps.c_rn, config.tau.cb_bps_hz * w);
    }

    std::vector<double> all_db;
    for (const auto& s : field)
        if (!s.excluded()) all_db.push_back(to_db(s.gamma));
    const EmpiricalCdf cdf(all_db);
    json sinr{{"backend", backend_name(config.backend)},
              {"mean_db", [&] {
                   KahanSum k;
                   for (double v : all_db) k.add(v);
                   return k.value() / static_cast<double>(all_db.size());
               }()},
              {"p10_db", cdf.quantile(0.10)},
              {"p50_db", cdf.quantile(0.50)},
              {"p90_db", cdf.quantile(0.90)}};

    json report{{"config", config.to_json()}, {"capacity", cap}, {"sinr", sinr}};
    if (layout.n > 0) {
        const ExactSinr exact(grid, layout, config.propagation);
        const auto bh = exact.sinr_backhaul();
        const FluidModel fluid(config.propagation, grid, layout.pr_dbm);
        report["backhaul"] = json{{"gamma_db_exact", to_db(bh.gamma)},
                                  {"i4", bh.i4},
                                  {"gamma_db_fluid", to_db(fluid.sinr_backhaul(layout.rr))}};
    }
    write_json(config.out_dir, "report.json", report);
    std::cout << "evaluate: C_cell = " << c_cell / w << " bits/s/Hz (tau = " << tau_used
              << "), report written to " << config.out_dir << "/report.json\n";
    return 0;
}

int cmd_validate(const ExperimentConfig& config) {
    const CellGrid grid = config.make_grid();
    const UESampleSet samples = config.make_samples(grid);
    const CapacityPipeline pipeline(grid, config.propagation, samples, config.link_adaptation);
    const RelayLayout layout = config.make_layout();

    const auto exact_field = pipeline.sinr_field(layout, Backend::Exact);
    const auto fluid_field = pipeline.sinr_field(layout, Backend::Fluid);

    const auto enb_exact = sinr_db_of(exact_field, false);
    const auto enb_fluid = sinr_db_of(fluid_field, false);
    const auto rn_exact = sinr_db_of(exact_field, true);
    const auto rn_fluid = sinr_db_of(fluid_field, true);

    write_cdf_csv(config.out_dir, "cdf_enb_exact.csv", config, enb_exact);
    write_cdf_csv(config.out_dir, "cdf_enb_fluid.csv", config, enb_fluid);
    write_cdf_csv(config.out_dir, "cdf_rn_exact.csv", config, rn_exact);
    write_cdf_csv(config.out_dir, "cdf_rn_fluid.csv", config, rn_fluid);

    // Relay-served mean SINR by distance to the serving relay.
    std::vector<double> edges;
    for (double e = 0.0; e <= 1.2000001; e += config.validation.bin_width_over_rc)
        edges.push_back(e * grid.Rc());
    auto out = open_out(config.out_dir, "mean_vs_dist.csv", config);
    out << "bin_center_over_Rc,mean_sinr_db,backend\n";
    for (const auto* field : {&exact_field, &fluid_field}) {
        std::vector<double> dist, db;
        for (const auto& s : *field) {
            if (s.excluded() || s.server.kind != NodeRef::Kind::Relay) continue;
            dist.push_back(s.dist_to_server);
            db.push_back(to_db(s.gamma));
        }
        const char* name = field == &exact_field ? "exact" : "fluid";
        for (const auto& b : mean_sinr_vs_distance(dist, db, edges))
            if (b.count > 0)
                out << fmt(b.center / grid.Rc()) << "," << fmt(b.mean_db) << "," << name << "\n";
    }

    double ks_enb = std::numeric_limits<double>::quiet_NaN();
    double ks_rn = std::numeric_limits<double>::quiet_NaN();
    if (!enb_exact.empty() && !enb_fluid.empty())
        ks_enb = ks_distance(EmpiricalCdf(enb_exact), EmpiricalCdf(enb_fluid));
    if (!rn_exact.empty() && !rn_fluid.empty())
        ks_rn = ks_distance(EmpiricalCdf(rn_exact), EmpiricalCdf(rn_fluid));

    double excluded = 0.0;
    for (const auto& s : exact_field) excluded += s.excluded() ? 1.0 : 0.0;
    excluded /= static_cast<double>(exact_field.size());

    write_json(config.out_dir, "ks_summary.json",
               json{{"config", config.to_json()},
                    {"ks_enb_served", ks_enb},
                    {"ks_rn_served", ks_rn},
                    {"count_enb_served", enb_exact.size()},
                    {"count_rn_served", rn_exact.size()},
                    {"excluded_fraction", excluded}});
    std::cout << "validate: KS(eNB) = " << ks_enb << ", KS(RN) = " << ks_rn
              << ", outputs written to " << config.out_dir << "\n";
    return 0;
}

int cmd_optimize(const ExperimentConfig& config) {
    const RunResult r = run_optimize(config);
    const SearchSpace space = make_space(config);
    std::cout << "optimize: best n = " << space.n_values[static_cast<std::size_t>(r.best.state.in)]
              << ", C_cell = " << r.best.c_cell / config.propagation.bandwidth_hz
              << " bits/s/Hz, outputs written to " << config.out_dir << "\n";
    return 0;
}

int cmd_exhaustive(const ExperimentConfig& config) {
    const RunResult r = run_exhaustive(config);
    const SearchSpace space = make_space(config);
    std::cout << "exhaustive: best n = "
              << space.n_values[static_cast<std::size_t>(r.best.state.in)]
              << ", C_cell = " << r.best.c_cell / config.propagation.bandwidth_hz
              << " bits/s/Hz, outputs written to " << config.out_dir << "\n";
    return 0;
}

int cmd_sweep(const ExperimentConfig& config, const std::string& sweep_arg, bool exhaustive) {
    if (sweep_arg == "tau_star") {
        auto out = open_out(config.out_dir, "tau_star_sweep.csv", config);
        out << "n,RR_over_Rc,phi_rad,PR_dbm,cell_capacity_bps,tau_star,tau_backhaul\n";
        for (int n = 0; n <= 6; ++n) {
            ExperimentConfig cfg = config;
            cfg.fix_n = n;
            cfg.tau = TauSpec::fixed(0.0);
            cfg.out_dir = config.out_dir + "/sweep_tau_star/n" + std::to_string(n);
            const RunResult r = exhaustive ? run_exhaustive(cfg) : run_optimize(cfg);
            const SearchSpace space = make_space(cfg);
            const SearchContext ctx(cfg);
            const double ts =
                n == 0 ? 0.0 : tau_star(ctx.c_cell0, r.best.caps.c_enb, r.best.caps.c_rn);
            const double tb = tau_backhaul(r.best.caps.c_rn,
                                           cfg.tau.cb_bps_hz * cfg.propagation.bandwidth_hz);
            out << n << "," << fmt(space.rr_over_rc[static_cast<std::size_t>(r.best.state.ir)])
                << "," << fmt(space.phi_rad[static_cast<std::size_t>(r.best.state.iphi)]) << ","
                << fmt(space.pr_dbm[static_cast<std::size_t>(r.best.state.ip)]) << ","
                << fmt(r.best.c_cell) << "," << fmt(ts) << "," << fmt(tb) << "\n";
        }
        std::cout << "sweep tau_star: written to " << config.out_dir << "/tau_star_sweep.csv\n";
        return 0;
    }

    const auto eq = sweep_arg.find('=');
    if (eq == std::string::npos)
        throw ConfigError("--sweep expects KEY=V1,V2,... or tau_star, got '" + sweep_arg + "'");
    const std::string key = sweep_arg.substr(0, eq);
    if (key != "omega_R")
        throw ConfigError("unsupported sweep key '" + key + "' (supported: omega_R, tau_star)");

    std::vector<std::string> tokens;
    std::string rest = sweep_arg.substr(eq + 1);
    std::size_t pos = 0;
    while (pos != std::string::npos) {
        const auto comma = rest.find(',', pos);
        tokens.push_back(rest.substr(pos, comma == std::string::npos ? comma : comma - pos));
        pos = comma == std::string::npos ? comma : comma + 1;
    }
    if (tokens.empty()) throw ConfigError("--sweep " + key + ": no values given");

    auto out = open_out(config.out_dir, "sweep_summary.csv", config);
    out << "omega_R,n,RR_over_Rc,phi_rad,PR_dbm,cell_capacity_bps\n";
    for (const auto& tok : tokens) {
        double omega = 0.0;
        try {
            omega = std::stod(tok);
        } catch (const std::exception&) {
            throw ConfigError("--sweep omega_R: bad value '" + tok + "'");
        }
        if (!(omega > 0.0)) throw ConfigError("--sweep omega_R: values must be positive");
        ExperimentConfig cfg = config;
        cfg.propagation.kr = omega * cfg.propagation.k;
        cfg.out_dir = config.out_dir + "/sweep_omega_R/" + tok;
        const RunResult r = exhaustive ? run_exhaustive(cfg) : run_optimize(cfg);
        const SearchSpace space = make_space(cfg);
        out << tok << "," << space.n_values[static_cast<std::size_t>(r.best.state.in)] << ","
            << fmt(space.rr_over_rc[static_cast<std::size_t>(r.best.state.ir)]) << ","
            << fmt(space.phi_rad[static_cast<std::size_t>(r.best.state.iphi)]) << ","
            << fmt(space.pr_dbm[static_cast<std::size_t>(r.best.state.ip)]) << ","
            << fmt(r.best.c_cell) << "\n";
    }
    std::cout << "sweep omega_R: written to " << config.out_dir << "/sweep_summary.csv\n";
    return 0;
}

}  // namespace hexrelay
