#include "hexrelay/config.hpp"

#include <fstream>
#include <set>

namespace hexrelay {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    for (const auto& [key, _] : j.items())
        if (!allowed.contains(key)) throw ConfigError("unknown config key: " + path + key);
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) {
        try {
            out = j.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError(std::string("bad value for config key: ") + key);
        }
    }
}

}  // namespace

const char* backend_name(Backend b) { return b == Backend::Exact ? "exact" : "fluid"; }

Backend parse_backend(const std::string& name) {
    if (name == "exact") return Backend::Exact;
    if (name == "fluid") return Backend::Fluid;
    throw ConfigError("backend must be 'exact' or 'fluid', got '" + name + "'");
}

TauSpec parse_tau_flag(const std::string& text) {
    if (text == "star") return TauSpec::star();
    if (text.rfind("fixed:", 0) == 0) {
        try {
            return TauSpec::fixed(std::stod(text.substr(6)));
        } catch (const std::exception&) {
            throw ConfigError("bad --tau value: " + text);
        }
    }
    if (text.rfind("backhaul:", 0) == 0) {
        try {
            return TauSpec::backhaul(std::stod(text.substr(9)));
        } catch (const std::exception&) {
            throw ConfigError("bad --tau value: " + text);
        }
    }
    throw ConfigError("--tau must be fixed:X, star or backhaul:CB, got '" + text + "'");
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig c;
    check_keys(j, {"schema_version", "backend", "grid", "propagation", "link_adaptation",
                   "sampling", "layout", "search", "annealing", "tau", "validation", "output"},
               "");

    read(j, "schema_version", c.schema_version);
    if (c.schema_version != 1)
        throw ConfigError("unsupported schema_version: " + std::to_string(c.schema_version));

    if (j.contains("backend")) c.backend = parse_backend(j.at("backend").get<std::string>());

    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        check_keys(g, {"Rc_km", "rings"}, "grid.");
        read(g, "Rc_km", c.grid.rc_km);
        read(g, "rings", c.grid.rings);
        if (!(c.grid.rc_km > 0.0)) throw ConfigError("grid.Rc_km must be positive");
        if (c.grid.rings < 0) throw ConfigError("grid.rings must be non-negative");
    }

    if (j.contains("propagation")) {
        const auto& p = j.at("propagation");
        check_keys(p, {"P_dbm", "PR_dbm", "K", "eta", "KR", "etaR", "KB", "etaB", "Nth_dbm",
                       "W_hz"},
                   "propagation.");
        read(p, "P_dbm", c.propagation.p_dbm);
        read(p, "PR_dbm", c.propagation.pr_dbm);
        read(p, "K", c.propagation.k);
        read(p, "eta", c.propagation.eta);
        read(p, "KR", c.propagation.kr);
        read(p, "etaR", c.propagation.eta_r);
        read(p, "Nth_dbm", c.propagation.nth_dbm);
        read(p, "W_hz", c.propagation.bandwidth_hz);
        // backhaul constants default to the direct-link ones
        c.propagation.kb = c.propagation.k;
        c.propagation.eta_b = c.propagation.eta;
        read(p, "KB", c.propagation.kb);
        read(p, "etaB", c.propagation.eta_b);
        try {
            c.propagation.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("propagation: ") + e.what());
        }
    }

    if (j.contains("link_adaptation")) {
        const auto& l = j.at("link_adaptation");
        check_keys(l, {"low_db", "high_db", "slope", "cap_bps_hz"}, "link_adaptation.");
        read(l, "low_db", c.link_adaptation.low_db);
        read(l, "high_db", c.link_adaptation.high_db);
        read(l, "slope", c.link_adaptation.slope);
        read(l, "cap_bps_hz", c.link_adaptation.cap);
        if (!(c.link_adaptation.low_db < c.link_adaptation.high_db))
            throw ConfigError("link_adaptation: low_db must be below high_db");
    }

    if (j.contains("sampling")) {
        const auto& s = j.at("sampling");
        check_keys(s, {"N", "scheme", "seed"}, "sampling.");
        read(s, "N", c.sampling.n);
        read(s, "seed", c.sampling.seed);
        if (s.contains("scheme")) {
            const auto scheme = s.at("scheme").get<std::string>();
            if (scheme == "grid")
                c.sampling.scheme = SampleScheme::Grid;
            else if (scheme == "uniform")
                c.sampling.scheme = SampleScheme::UniformRandom;
            else
                throw ConfigError("sampling.scheme must be 'grid' or 'uniform'");
        }
        if (c.sampling.n < 1) throw ConfigError("sampling.N must be >= 1");
    }

    if (j.contains("layout")) {
        const auto& l = j.at("layout");
        check_keys(l, {"n", "RR_over_Rc", "phi_rad", "PR_dbm"}, "layout.");
        c.layout.pr_dbm = c.propagation.pr_dbm;
        read(l, "n", c.layout.n);
        read(l, "RR_over_Rc", c.layout.rr_over_rc);
        read(l, "phi_rad", c.layout.phi_rad);
        read(l, "PR_dbm", c.layout.pr_dbm);
        if (c.layout.n < 0 || c.layout.n > 6) throw ConfigError("layout.n must lie in 0..6");
        if (c.layout.rr_over_rc < 0.0 || c.layout.rr_over_rc > 1.0)
            throw ConfigError("layout.RR_over_Rc must lie in [0, 1]");
    } else {
        c.layout.pr_dbm = c.propagation.pr_dbm;
    }

    if (j.contains("search")) {
        const auto& s = j.at("search");
        check_keys(s, {"fix_n"}, "search.");
        read(s, "fix_n", c.fix_n);
        if (c.fix_n < -1 || c.fix_n > 6) throw ConfigError("search.fix_n must lie in -1..6");
    }

    if (j.contains("annealing")) {
        const auto& a = j.at("annealing");
        check_keys(a, {"T0", "alpha", "iterations", "seed"}, "annealing.");
        read(a, "T0", c.annealing.t0);
        read(a, "alpha", c.annealing.alpha);
        read(a, "iterations", c.annealing.iterations);
        read(a, "seed", c.annealing.seed);
        try {
            c.annealing.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("annealing: ") + e.what());
        }
    }

    if (j.contains("tau")) {
        const auto& t = j.at("tau");
        check_keys(t, {"policy", "value", "CB_bps_hz", "CB_from_sinr"}, "tau.");
        std::string policy = "fixed";
        read(t, "policy", policy);
        if (policy == "fixed")
            c.tau.policy = TauSpec::Policy::Fixed;
        else if (policy == "star")
            c.tau.policy = TauSpec::Policy::Star;
        else if (policy == "backhaul")
            c.tau.policy = TauSpec::Policy::Backhaul;
        else
            throw ConfigError("tau.policy must be fixed, star or backhaul");
        read(t, "value", c.tau.value);
        read(t, "CB_bps_hz", c.tau.cb_bps_hz);
        read(t, "CB_from_sinr", c.tau.cb_from_sinr);
        if (c.tau.policy == TauSpec::Policy::Fixed &&
            (c.tau.value < 0.0 || c.tau.value > 1.0))
            throw ConfigError("tau.value must lie in [0, 1]");
        if (c.tau.policy == TauSpec::Policy::Backhaul && !(c.tau.cb_bps_hz > 0.0))
            throw ConfigError("tau.CB_bps_hz must be positive");
    }

    if (j.contains("validation")) {
        const auto& v = j.at("validation");
        check_keys(v, {"bin_width_over_Rc", "min_bin_count"}, "validation.");
        read(v, "bin_width_over_Rc", c.validation.bin_width_over_rc);
        read(v, "min_bin_count", c.validation.min_bin_count);
        if (!(c.validation.bin_width_over_rc > 0.0))
            throw ConfigError("validation.bin_width_over_Rc must be positive");
    }

    if (j.contains("output")) {
        const auto& o = j.at("output");
        check_keys(o, {"dir"}, "output.");
        read(o, "dir", c.out_dir);
    }
    return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return from_json(j);
}

nlohmann::json ExperimentConfig::to_json() const {
    json j;
    j["schema_version"] = schema_version;
    j["backend"] = backend_name(backend);
    j["grid"] = {{"Rc_km", grid.rc_km}, {"rings", grid.rings}};
    j["propagation"] = {{"P_dbm", propagation.p_dbm},   {"PR_dbm", propagation.pr_dbm},
                        {"K", propagation.k},           {"eta", propagation.eta},
                        {"KR", propagation.kr},         {"etaR", propagation.eta_r},
                        {"KB", propagation.kb},         {"etaB", propagation.eta_b},
                        {"Nth_dbm", propagation.nth_dbm}, {"W_hz", propagation.bandwidth_hz}};
    j["link_adaptation"] = {{"low_db", link_adaptation.low_db},
                            {"high_db", link_adaptation.high_db},
                            {"slope", link_adaptation.slope},
                            {"cap_bps_hz", link_adaptation.cap}};
    j["sampling"] = {{"N", sampling.n},
                     {"scheme", sampling.scheme == SampleScheme::Grid ? "grid" : "uniform"},
                     {"seed", sampling.seed}};
    j["layout"] = {{"n", layout.n},
                   {"RR_over_Rc", layout.rr_over_rc},
                   {"phi_rad", layout.phi_rad},
                   {"PR_dbm", layout.pr_dbm}};
    j["search"] = {{"fix_n", fix_n}};
    j["annealing"] = {{"T0", annealing.t0},
                      {"alpha", annealing.alpha},
                      {"iterations", annealing.iterations},
                      {"seed", annealing.seed}};
    const char* policy = tau.policy == TauSpec::Policy::Fixed
                             ? "fixed"
                             : tau.policy == TauSpec::Policy::Star ? "star" : "backhaul";
    j["tau"] = {{"policy", policy},
                {"value", tau.value},
                {"CB_bps_hz", tau.cb_bps_hz},
                {"CB_from_sinr", tau.cb_from_sinr}};
    j["validation"] = {{"bin_width_over_Rc", validation.bin_width_over_rc},
                       {"min_bin_count", validation.min_bin_count}};
    j["output"] = {{"dir", out_dir}};
    return j;
}

CellGrid ExperimentConfig::make_grid() const { return CellGrid(grid.rc_km, grid.rings); }

RelayLayout ExperimentConfig::make_layout() const {
    return RelayLayout{layout.n, layout.rr_over_rc * grid.rc_km, layout.phi_rad, layout.pr_dbm};
}

UESampleSet ExperimentConfig::make_samples(const CellGrid& g) const {
    return sample_cell(g, sampling.n, sampling.scheme, sampling.seed);
}

}  // namespace hexrelay
