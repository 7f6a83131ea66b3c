#include "lgt/harness/config.hpp"

#include <cmath>
#include <stdexcept>

#include "lgt/wala.hpp"

namespace lgt {

namespace {

using nlohmann::json;

const char* side_name(Side s) {
    switch (s) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::Top: return "top";
    case Side::Bottom: return "bottom";
    }
    return "?";
}

Side side_from(const std::string& s) {
    if (s == "left") return Side::Left;
    if (s == "right") return Side::Right;
    if (s == "top") return Side::Top;
    if (s == "bottom") return Side::Bottom;
    throw std::invalid_argument("unknown side '" + s + "'");
}

const char* prep_name(PrepSpec::Kind k) {
    switch (k) {
    case PrepSpec::Kind::Wala: return "wala";
    case PrepSpec::Kind::WalaPair: return "wala_pair";
    case PrepSpec::Kind::WalaSuperposition: return "wala_superposition";
    case PrepSpec::Kind::WalaString: return "wala_string";
    case PrepSpec::Kind::Toric: return "toric";
    case PrepSpec::Kind::Polarized: return "polarized";
    }
    return "?";
}

PrepSpec::Kind prep_from(const std::string& s) {
    if (s == "wala") return PrepSpec::Kind::Wala;
    if (s == "wala_pair") return PrepSpec::Kind::WalaPair;
    if (s == "wala_superposition") return PrepSpec::Kind::WalaSuperposition;
    if (s == "wala_string") return PrepSpec::Kind::WalaString;
    if (s == "toric") return PrepSpec::Kind::Toric;
    if (s == "polarized") return PrepSpec::Kind::Polarized;
    throw std::invalid_argument("unknown prep kind '" + s + "'");
}

} // namespace

json ExperimentConfig::to_json() const {
    json j;
    j["scenario"] = scenario;
    json pins = json::array();
    for (const auto& p : lattice.pinned_links)
        pins.push_back({{"side", side_name(p.side)}, {"row", p.row}, {"col", p.col}});
    j["lattice"] = {{"lx", lattice.lx}, {"ly", lattice.ly}, {"pinned_links", pins}};
    j["params"] = {{"j_e", j_e}, {"j_m", j_m}};
    j["h_e"] = h_e_grid;
    j["lambda"] = lambda_grid;
    j["dt"] = dt;
    j["n_steps"] = n_steps;

    json jp;
    jp["kind"] = prep_name(prep.kind);
    if (prep.theta) jp["theta"] = *prep.theta;
    if (prep.pair_link) jp["pair_link"] = *prep.pair_link;
    if (prep.superposition) {
        jp["s1"] = prep.superposition->s1.links;
        jp["s2"] = prep.superposition->s2.links;
        jp["branch"] = std::string(1, prep.superposition->branch);
    }
    if (prep.string_path) jp["string_path"] = prep.string_path->links;
    j["prep"] = std::move(jp);

    j["mode"] = mode == TrotterMode::Direct ? "direct" : "gate_level";
    if (noise) {
        json jn;
        jn["p2"] = noise->model.p2;
        jn["n_traj"] = noise->n_traj;
        jn["shots_per_traj"] = noise->shots_per_traj;
        if (noise->model.readout.enabled()) {
            jn["readout"] = {{"eps0", noise->model.readout.per_qubit[0].eps0},
                             {"eps1", noise->model.readout.per_qubit[0].eps1}};
        }
        j["noise"] = std::move(jn);
    } else {
        j["noise"] = nullptr;
    }
    j["mitigation"] = {{"postselect_ancilla", mitigation.postselect_ancilla},
                       {"postselect_charge", mitigation.postselect_charge},
                       {"depol_rescale", mitigation.depol_rescale},
                       {"readout_invert", mitigation.readout_invert}};
    j["seed"] = seed;
    j["out_dir"] = out_dir;
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig cfg;
    cfg.scenario = j.at("scenario").get<std::string>();
    if (j.contains("lattice")) {
        const json& jl = j["lattice"];
        cfg.lattice.lx = jl.at("lx").get<int>();
        cfg.lattice.ly = jl.at("ly").get<int>();
        cfg.lattice.pinned_links.clear();
        for (const auto& p : jl.value("pinned_links", json::array()))
            cfg.lattice.pinned_links.push_back(
                {side_from(p.at("side").get<std::string>()), p.at("row").get<int>(),
                 p.at("col").get<int>()});
    }
    if (j.contains("params")) {
        cfg.j_e = j["params"].value("j_e", 1.0);
        cfg.j_m = j["params"].value("j_m", 1.0);
    }
    if (j.contains("h_e")) cfg.h_e_grid = j["h_e"].get<std::vector<double>>();
    if (j.contains("lambda")) cfg.lambda_grid = j["lambda"].get<std::vector<double>>();
    cfg.dt = j.value("dt", cfg.dt);
    cfg.n_steps = j.value("n_steps", cfg.n_steps);

    if (j.contains("prep")) {
        const json& jp = j["prep"];
        cfg.prep.kind = prep_from(jp.value("kind", "wala"));
        if (jp.contains("theta")) cfg.prep.theta = jp["theta"].get<double>();
        if (jp.contains("pair_link")) cfg.prep.pair_link = jp["pair_link"].get<LinkId>();
        if (jp.contains("s1")) {
            SuperpositionSpec sp;
            sp.s1.links = jp.at("s1").get<std::vector<LinkId>>();
            sp.s2.links = jp.at("s2").get<std::vector<LinkId>>();
            sp.branch = jp.value("branch", std::string("+"))[0];
            cfg.prep.superposition = sp;
        }
        if (jp.contains("string_path")) {
            PathSpec path;
            path.links = jp["string_path"].get<std::vector<LinkId>>();
            cfg.prep.string_path = path;
        }
    }

    std::string mode = j.value("mode", "direct");
    if (mode == "direct")
        cfg.mode = TrotterMode::Direct;
    else if (mode == "gate_level")
        cfg.mode = TrotterMode::GateLevel;
    else
        throw std::invalid_argument("unknown mode '" + mode + "'");

    if (j.contains("noise") && !j["noise"].is_null()) {
        NoiseConfig nc;
        const json& jn = j["noise"];
        nc.model.p2 = jn.value("p2", 0.007);
        nc.n_traj = jn.value("n_traj", 30);
        nc.shots_per_traj = jn.value("shots_per_traj", 400);
        if (jn.contains("readout") && !jn["readout"].is_null()) {
            double e0 = jn["readout"].value("eps0", 0.006);
            double e1 = jn["readout"].value("eps1", 0.02);
            // Sized when the circuit width is known; store one entry per link
            // later. Record rates here.
            nc.model.readout.per_qubit = {{e0, e1}};
        }
        cfg.noise = nc;
    }

    if (j.contains("mitigation")) {
        const json& jm = j["mitigation"];
        cfg.mitigation.postselect_ancilla = jm.value("postselect_ancilla", true);
        cfg.mitigation.postselect_charge = jm.value("postselect_charge", true);
        cfg.mitigation.depol_rescale = jm.value("depol_rescale", true);
        cfg.mitigation.readout_invert = jm.value("readout_invert", false);
    }
    cfg.seed = j.value("seed", uint64_t{7});
    cfg.out_dir = j.value("out_dir", std::string("results"));
    cfg.validate();
    return cfg;
}

void ExperimentConfig::validate() const {
    if (scenario.empty()) throw std::invalid_argument("config needs a scenario name");
    if (lattice.lx < 2 || lattice.ly < 2) throw std::invalid_argument("lattice too small");
    if (dt <= 0) throw std::invalid_argument("dt must be positive");
    if (n_steps < 0) throw std::invalid_argument("n_steps must be non-negative");
    if (h_e_grid.empty() || lambda_grid.empty())
        throw std::invalid_argument("h_e and lambda grids must be non-empty");
    if (noise) {
        noise->model.validate();
        if (noise->n_traj < 1 || noise->shots_per_traj < 1)
            throw std::invalid_argument("noise requires n_traj >= 1 and shots_per_traj >= 1");
    }
}

LinkId default_pair_link(const Lattice& lattice) {
    // Most central link: endpoints minimize total distance to the grid center.
    double cr = (lattice.ly() - 1) / 2.0, cc = (lattice.lx() - 1) / 2.0;
    LinkId best = -1;
    double best_score = 1e300;
    for (const LinkInfo& l : lattice.links()) {
        if (l.pinned) continue;
        auto [a, b] = lattice.link_endpoints(l.id);
        auto [ra, ca] = lattice.vertex_coords(a);
        auto [rb, cb] = lattice.vertex_coords(b);
        double score = std::abs(ra - cr) + std::abs(ca - cc) + std::abs(rb - cr) +
                       std::abs(cb - cc);
        if (score < best_score - 1e-12) {
            best_score = score;
            best = l.id;
        }
    }
    return best;
}

SuperpositionSpec default_superposition(const Lattice& lattice, char branch) {
    SuperpositionSpec spec;
    spec.branch = branch;
    // Interleaved distance-2 pairs along the longer central axis, so both
    // branches reach the same distance-1 configuration in a single hop.
    if (lattice.ly() >= 4) {
        int c = (lattice.lx() - 1) / 2;
        int r0 = (lattice.ly() - 4) / 2;
        spec.s1.links = {lattice.vertical_link(r0, c), lattice.vertical_link(r0 + 1, c)};
        spec.s2.links = {lattice.vertical_link(r0 + 1, c), lattice.vertical_link(r0 + 2, c)};
    } else if (lattice.lx() >= 4) {
        int r = (lattice.ly() - 1) / 2;
        int c0 = (lattice.lx() - 4) / 2;
        spec.s1.links = {lattice.horizontal_link(r, c0), lattice.horizontal_link(r, c0 + 1)};
        spec.s2.links = {lattice.horizontal_link(r, c0 + 1), lattice.horizontal_link(r, c0 + 2)};
    } else {
        throw std::invalid_argument(
            "lattice too small for the default superposition; override s1/s2");
    }
    return spec;
}

PathSpec default_string_path(const Lattice& lattice) {
    if (lattice.n_pinned() != 2)
        throw std::invalid_argument("default string path needs the two mid-row pins");
    if (lattice.ly() % 2 == 0)
        throw std::invalid_argument("default string path needs an odd number of rows");
    if (lattice.lx() < 4)
        throw std::invalid_argument("default string path needs at least four columns");
    const int m = lattice.ly() / 2;     // middle row
    const int b = lattice.lx() / 2 - 1; // bump column
    PathSpec path;
    path.links.push_back(lattice.pinned_link(0));
    for (int c = 0; c < b; ++c) path.links.push_back(lattice.horizontal_link(m, c));
    path.links.push_back(lattice.vertical_link(m - 1, b));
    path.links.push_back(lattice.horizontal_link(m - 1, b));
    path.links.push_back(lattice.vertical_link(m - 1, b + 1));
    for (int c = b + 1; c < lattice.lx() - 1; ++c)
        path.links.push_back(lattice.horizontal_link(m, c));
    path.links.push_back(lattice.pinned_link(1));
    return path;
}

double resolve_theta(const Lattice& lattice, const PrepSpec& prep,
                     const HamiltonianParams& params) {
    if (prep.kind == PrepSpec::Kind::Toric) return M_PI / 2;
    if (prep.kind == PrepSpec::Kind::Polarized) return 0.0;
    if (prep.theta) return *prep.theta;
    return optimize_theta(lattice.lx(), lattice.ly(), params).theta;
}

} // namespace lgt
