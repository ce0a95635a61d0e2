// xnyfem: verification CLI for the transition-element kernel.
//   xnyfem run <config.json> [--jobs N] [--out DIR] [--exhaustive]
//                            [--dump-matrix] [--dump-shapes GRID]

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "xny/study.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Shortest decimal representation that round-trips to the same double.
std::string fmt(double v) {
    for (int prec = 1; prec <= 17; ++prec) {
        std::ostringstream os;
        os << std::setprecision(prec) << v;
        if (std::stod(os.str()) == v)
            return os.str();
    }
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

void atomic_write(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

xny::StudyConfig parse_config(const json& j) {
    if (!j.contains("schema") || j.at("schema").get<int>() != 1)
        throw xny::ConfigError("config: expected \"schema\": 1");
    xny::StudyConfig cfg;
    static const std::set<std::string> known = {
        "schema", "kind",      "pairing", "dist",     "p_list",
        "p_x",    "p_y_list",  "levels",  "n_y",      "n_s",
        "pairings", "dists",   "n_y_list", "n_s_list", "mode",
        "refinement", "E",     "nu"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            throw xny::ConfigError("config: unknown key \"" + it.key() +
                                   "\"");
    cfg.kind = j.at("kind").get<std::string>();
    auto get = [&](const char* k, auto& dst) {
        if (j.contains(k))
            dst = j.at(k).get<std::decay_t<decltype(dst)>>();
    };
    get("pairing", cfg.pairing);
    get("dist", cfg.dist);
    get("p_list", cfg.p_list);
    get("p_x", cfg.p_x);
    get("p_y_list", cfg.p_y_list);
    get("levels", cfg.levels);
    get("n_y", cfg.n_y);
    get("n_s", cfg.n_s);
    get("pairings", cfg.pairings);
    get("dists", cfg.dists);
    get("n_y_list", cfg.n_y_list);
    get("n_s_list", cfg.n_s_list);
    get("mode", cfg.mode);
    get("refinement", cfg.refinement);
    get("E", cfg.E);
    get("nu", cfg.nu);
    return cfg;
}

json config_to_json(const xny::StudyConfig& c) {
    return json{{"schema", 1},
                {"kind", c.kind},
                {"pairing", c.pairing},
                {"dist", c.dist},
                {"p_list", c.p_list},
                {"p_x", c.p_x},
                {"p_y_list", c.p_y_list},
                {"levels", c.levels},
                {"n_y", c.n_y},
                {"n_s", c.n_s},
                {"pairings", c.pairings},
                {"dists", c.dists},
                {"n_y_list", c.n_y_list},
                {"n_s_list", c.n_s_list},
                {"mode", c.mode},
                {"refinement", c.refinement},
                {"E", c.E},
                {"nu", c.nu},
                {"jobs", c.jobs},
                {"quad_boost", c.quad_boost}};
}

std::string geometry_for_kind(const std::string& kind) {
    if (kind == "patch-linear")
        return "bathe-patch";
    if (kind == "patch-quadratic")
        return "beam-quadratic";
    if (kind == "patch-cubic")
        return "beam-cubic";
    if (kind == "conv-hole")
        return "hole-quadrant";
    if (kind == "singular-cantilever")
        return "cantilever";
    if (kind == "singular-L")
        return "l-domain";
    return "square-highorder";
}

void dump_matrix(const xny::StudyConfig& cfg, const fs::path& out_dir) {
    xny::Mesh mesh = xny::builtin_mesh(geometry_for_kind(cfg.kind));
    int level = cfg.levels.empty() ? 0 : cfg.levels.front();
    for (int l = 0; l < level; ++l)
        mesh = xny::uniform_refine(mesh);
    if (cfg.n_y > 1 && cfg.n_s > 0)
        mesh = xny::refine_y_region(mesh, {cfg.n_y, cfg.n_s});
    int p = cfg.p_list.empty() ? cfg.p_x : cfg.p_list.front();
    int p_y = cfg.p_y_list.empty() ? p : cfg.p_y_list.front();
    if (cfg.kind.rfind("conv-", 0) == 0)
        p = cfg.p_x;
    else
        p_y = p;
    xny::FeSpace space =
        xny::make_space(mesh, cfg.pairing, cfg.dist, p, p_y);
    Eigen::Matrix3d D =
        xny::material_matrix({cfg.E, cfg.nu, false});
    auto K = xny::assemble_stiffness(space, D, cfg.quad_boost, cfg.jobs);
    std::ostringstream os;
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << K.rows() << " " << K.cols() << " " << K.nonZeros() << "\n";
    for (int col = 0; col < K.outerSize(); ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(K, col); it;
             ++it)
            os << it.row() + 1 << " " << col + 1 << " " << fmt(it.value())
               << "\n";
    atomic_write(out_dir / "matrix.mtx", os.str());
}

void dump_shapes(const xny::StudyConfig& cfg, int grid,
                 const fs::path& out_dir) {
    xny::Mesh mesh = xny::builtin_mesh("square-highorder");
    if (cfg.n_y > 1)
        mesh = xny::refine_y_region(mesh, {cfg.n_y, 1});
    int p = cfg.p_list.empty() ? cfg.p_x : cfg.p_list.front();
    int p_y = cfg.p_y_list.empty() ? p : cfg.p_y_list.front();
    xny::FeSpace space =
        xny::make_space(mesh, cfg.pairing, cfg.dist, p, p_y);
    std::size_t target = 0;
    for (std::size_t e = 0; e < space.n_elements(); ++e)
        if (mesh.element_class[e] == "XNY")
            target = e;
    const xny::ShapeSet& ss = space.shapes(target);
    std::ostringstream os;
    os << "xi,eta,i,value,dxi,deta\n";
    for (int a = 0; a < grid; ++a)
        for (int b = 0; b < grid; ++b) {
            double xi = -1.0 + 2.0 * a / (grid - 1);
            double eta = -1.0 + 2.0 * b / (grid - 1);
            auto vals = ss.eval_all(xi, eta);
            for (std::size_t i = 0; i < vals.size(); ++i)
                os << fmt(xi) << "," << fmt(eta) << "," << i << ","
                   << fmt(vals[i].v) << "," << fmt(vals[i].dxi) << ","
                   << fmt(vals[i].deta) << "\n";
        }
    atomic_write(out_dir / "shapes.csv", os.str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verification studies for high-order transition elements"};
    app.require_subcommand(1);
    auto* run = app.add_subcommand("run", "Run a study from a JSON config");
    std::string config_path, out_dir = ".";
    int jobs = 1, shapes_grid = 0;
    bool exhaustive = false, want_matrix = false;
    run->add_option("config", config_path, "JSON study configuration")
        ->required();
    run->add_option("--jobs", jobs, "Assembly threads")
        ->check(CLI::Range(1, 64));
    run->add_option("--out", out_dir, "Output directory");
    run->add_flag("--exhaustive", exhaustive,
                  "Extra quadrature points (integration self-check)");
    run->add_flag("--dump-matrix", want_matrix,
                  "Write the assembled stiffness matrix (MatrixMarket)");
    run->add_option("--dump-shapes", shapes_grid,
                    "Write transition shape values on an NxN grid")
        ->check(CLI::Range(2, 501));
    CLI11_PARSE(app, argc, argv);

    xny::StudyConfig cfg;
    try {
        std::ifstream in(config_path);
        if (!in)
            throw xny::ConfigError("cannot open config " + config_path);
        std::stringstream buf;
        buf << in.rdbuf();
        json j;
        try {
            j = json::parse(buf.str());
        } catch (const json::parse_error& e) {
            throw xny::ConfigError(std::string("config parse error: ") +
                                   e.what());
        }
        cfg = parse_config(j);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    cfg.jobs = jobs;
    cfg.quad_boost = exhaustive ? 2 : 0;

    try {
        fs::create_directories(out_dir);
        if (cfg.kind == "basis-dump" && shapes_grid == 0)
            shapes_grid = 21;
        xny::StudyResult res = xny::run_study(cfg);
        std::ostringstream csv;
        csv << "n_dof,error,p_x,p_y,level\n";
        for (const auto& r : res.rows)
            csv << r.n_dof << "," << fmt(r.error) << "," << r.p_x << ","
                << r.p_y << "," << r.level << "\n";
        atomic_write(fs::path(out_dir) / "result.csv", csv.str());
        json meta;
        meta["schema"] = 1;
        meta["version"] = "1.0.0";
        meta["config"] = config_to_json(cfg);
        meta["seconds"] = res.seconds;
        meta["rows"] = res.rows.size();
        for (const auto& [k, v] : res.stats)
            meta["stats"][k] = v;
        atomic_write(fs::path(out_dir) / "meta.json", meta.dump(2) + "\n");
        if (want_matrix)
            dump_matrix(cfg, out_dir);
        if (shapes_grid > 0)
            dump_shapes(cfg, shapes_grid, out_dir);
    } catch (const xny::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
    std::cout << "ok\n";
    return 0;
}
