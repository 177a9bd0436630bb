// crlab: manifest-driven front end for the exact CR-geometry toolkit.
//
// `crlab run manifest.json` executes a task list; the other subcommands
// synthesize a one-task manifest from flags and run it through the same
// engine. Reports are JSON on stdout (or --out) and are byte-identical for
// identical inputs and seeds.
//
// Exit codes: 0 all tasks succeeded; 1 at least one task failed its
// preconditions; 2 the manifest or the flags were structurally invalid;
// 3 internal invariant violation.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "crlab/manifest.hpp"
#include "crlab/parser.hpp"

namespace {

using crlab::Json;

struct CommonOut {
    std::string out_path;
    std::optional<long long> seed;
};

int emit(const crlab::ManifestRun& run, const CommonOut& common) {
    const std::string text = run.report.dump(2) + "\n";
    if (common.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(common.out_path, std::ios::binary);
        if (!out) {
            std::cerr << "crlab: cannot write " << common.out_path << "\n";
            return 2;
        }
        out << text;
    }
    return run.exit_code;
}

int run_json(Json manifest, const CommonOut& common) {
    if (common.seed) manifest["seed"] = *common.seed;
    return emit(crlab::run_manifest(manifest), common);
}

// "z1=1/2; z2=3/4+1/16*i" -> point object. Each value is a constant
// expression in the polynomial grammar.
Json parse_point_flag(const std::string& text) {
    Json point = Json::object();
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw crlab::schema_error("point entries must look like z1=1/2, got \"" + item + "\"");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string name = trim(item.substr(0, eq));
        const std::string value = trim(item.substr(eq + 1));
        crlab::GaussianRational g;
        try {
            crlab::Poly constant = crlab::parse_poly(value, crlab::VarSpace{});
            g = constant.evaluate([](crlab::Variable v) -> crlab::GaussianRational {
                throw crlab::input_error("point values must be constants, found " +
                                         crlab::var_name(v));
            });
        } catch (const crlab::input_error& e) {
            throw crlab::schema_error("point value for " + name + ": " + e.what());
        }
        Json c = Json::object();
        c["re"] = g.re().str();
        c["im"] = g.im().str();
        point[name] = c;
    }
    if (point.empty()) throw crlab::schema_error("empty point string");
    return point;
}

struct GeometryFlags {
    int source_dim = 0, target_dim = 0;
    std::vector<std::string> source, target, map;
    std::string point;

    // Builds the shared part of a synthesized manifest.
    Json manifest(bool need_map) const {
        Json m = Json::object();
        Json vars = Json::object();
        if (source_dim) vars["source"] = source_dim;
        if (target_dim) vars["target"] = target_dim;
        if (!vars.empty()) m["variables"] = vars;
        if (!source.empty()) m["source"] = source;
        if (!target.empty()) m["target"] = target;
        if (!map.empty()) m["map"] = map;
        if (need_map && map.empty())
            throw crlab::schema_error("this subcommand needs --map components");
        if (!point.empty()) {
            Json pts = Json::object();
            pts["p"] = parse_point_flag(point);
            m["points"] = pts;
        }
        return m;
    }

    void attach(CLI::App* cmd, bool with_map) {
        cmd->add_option("--source-dim", source_dim, "Source ambient dimension");
        cmd->add_option("--target-dim", target_dim, "Target ambient dimension");
        cmd->add_option("--source", source, "Source defining polynomial (repeatable)");
        cmd->add_option("--target", target, "Target defining polynomial (repeatable)");
        if (with_map) cmd->add_option("--map", map, "Map component (repeatable)");
        cmd->add_option("--point", point, "Point, e.g. \"z1=1/2; z2=0\"");
    }
};

void attach_common(CLI::App* cmd, CommonOut& common) {
    cmd->add_option("--out", common.out_path, "Write the report here instead of stdout");
    cmd->add_option("--seed", common.seed, "Override the RNG seed");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact and numeric invariants of CR maps"};
    app.require_subcommand(1);

    // --- run ---------------------------------------------------------------
    std::string manifest_path;
    CommonOut run_common;
    auto* cmd_run = app.add_subcommand("run", "Execute a JSON manifest");
    cmd_run->add_option("manifest", manifest_path, "Path to the manifest")->required();
    attach_common(cmd_run, run_common);

    // --- rank / nondegen / normalize ---------------------------------------
    GeometryFlags rank_geo;
    CommonOut rank_common;
    int rank_order = 2;
    auto* cmd_rank = app.add_subcommand("rank", "Jet-span ranks at a point");
    rank_geo.attach(cmd_rank, true);
    cmd_rank->add_option("--order", rank_order, "Highest derivative order");
    attach_common(cmd_rank, rank_common);

    GeometryFlags nd_geo;
    CommonOut nd_common;
    int nd_max_order = 6;
    auto* cmd_nd = app.add_subcommand("nondegen", "Least order with full-width jet span");
    nd_geo.attach(cmd_nd, true);
    cmd_nd->add_option("--max-order", nd_max_order, "Highest order to examine");
    attach_common(cmd_nd, nd_common);

    GeometryFlags nm_geo;
    CommonOut nm_common;
    int nm_order = 2;
    auto* cmd_nm = app.add_subcommand("normalize", "Unitary frame normalization at a point");
    nm_geo.attach(cmd_nm, true);
    cmd_nm->add_option("--order", nm_order, "Frame order");
    attach_common(cmd_nm, nm_common);

    // --- levi ---------------------------------------------------------------
    GeometryFlags lv_geo;
    CommonOut lv_common;
    std::string lv_object = "source";
    auto* cmd_lv = app.add_subcommand("levi", "Levi form and signature at a point");
    lv_geo.attach(cmd_lv, false);
    cmd_lv->add_option("--object", lv_object, "Which manifold: source or target");
    attach_common(cmd_lv, lv_common);

    // --- fbi ----------------------------------------------------------------
    CommonOut fbi_common;
    std::string fbi_input, fbi_generator, fbi_axes, fbi_scales = "4:256", fbi_probe;
    std::vector<std::string> fbi_dirs;
    std::vector<double> fbi_params;
    int fbi_n_dirs = 0;
    double fbi_damping = 1.0, fbi_cutoff = 0.5;
    auto* cmd_fbi = app.add_subcommand("fbi", "Directional decay probe of sampled data");
    cmd_fbi->add_option("--input", fbi_input, "JSON sample file (axes + samples or generator)");
    cmd_fbi->add_option("--generator", fbi_generator, "Built-in sample family name");
    cmd_fbi->add_option("--params", fbi_params, "Generator parameters");
    cmd_fbi->add_option("--axes", fbi_axes, "Axes as lo:hi:count,lo:hi:count,...");
    cmd_fbi->add_option("--probe", fbi_probe, "Probe point, comma-separated");
    cmd_fbi->add_option("--directions", fbi_n_dirs, "Evenly spaced direction count (2D)");
    cmd_fbi->add_option("--direction", fbi_dirs, "Explicit direction vector, comma-separated");
    cmd_fbi->add_option("--scales", fbi_scales, "Doubling scale range lo:hi");
    cmd_fbi->add_option("--damping", fbi_damping, "Gaussian damping constant");
    cmd_fbi->add_option("--cutoff", fbi_cutoff, "Cutoff radius around the probe");
    attach_common(cmd_fbi, fbi_common);

    // --- verify-identities --------------------------------------------------
    CommonOut vi_common;
    std::string vi_dims = "3..6";
    int vi_trials = 1000;
    auto* cmd_vi = app.add_subcommand("verify-identities",
                                      "Randomized exact determinant-identity checks");
    cmd_vi->add_option("--dims", vi_dims, "Dimension range a..b");
    cmd_vi->add_option("--trials", vi_trials, "Trials per dimension");
    attach_common(cmd_vi, vi_common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*cmd_run) {
            std::ifstream in(manifest_path, std::ios::binary);
            if (!in) {
                std::cerr << "crlab: cannot read " << manifest_path << "\n";
                return 2;
            }
            std::stringstream buf;
            buf << in.rdbuf();
            Json parsed;
            {
                crlab::ManifestRun run = crlab::run_manifest_text(buf.str());
                if (run_common.seed) {
                    // Re-run with the override so the report reflects it.
                    parsed = Json::parse(buf.str());
                    parsed["seed"] = *run_common.seed;
                    run = crlab::run_manifest(parsed);
                }
                return emit(run, run_common);
            }
        }
        if (*cmd_rank) {
            Json m = rank_geo.manifest(true);
            Json task = Json::object();
            task["op"] = "rank";
            task["point"] = "p";
            task["order"] = rank_order;
            m["tasks"] = Json::array({task});
            return run_json(std::move(m), rank_common);
        }
        if (*cmd_nd) {
            Json m = nd_geo.manifest(true);
            Json task = Json::object();
            task["op"] = "nondegen";
            task["point"] = "p";
            task["max_order"] = nd_max_order;
            m["tasks"] = Json::array({task});
            return run_json(std::move(m), nd_common);
        }
        if (*cmd_nm) {
            Json m = nm_geo.manifest(true);
            Json task = Json::object();
            task["op"] = "normalize";
            task["point"] = "p";
            task["order"] = nm_order;
            m["tasks"] = Json::array({task});
            return run_json(std::move(m), nm_common);
        }
        if (*cmd_lv) {
            Json m = lv_geo.manifest(false);
            Json task = Json::object();
            task["op"] = "levi";
            task["object"] = lv_object;
            if (!lv_geo.point.empty()) task["point"] = "p";
            m["tasks"] = Json::array({task});
            return run_json(std::move(m), lv_common);
        }
        if (*cmd_fbi) {
            Json task = Json::object();
            task["op"] = "fbi";
            auto split_doubles = [](const std::string& s) {
                std::vector<double> out;
                std::stringstream ss(s);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    try {
                        out.push_back(std::stod(item));
                    } catch (const std::exception&) {
                        throw crlab::schema_error("expected a comma-separated number list, got \"" +
                                                  s + "\"");
                    }
                }
                return out;
            };
            if (!fbi_input.empty()) {
                task["input"] = fbi_input;
            } else if (!fbi_generator.empty()) {
                Json g = Json::object();
                g["name"] = fbi_generator;
                if (!fbi_params.empty()) g["params"] = fbi_params;
                task["generator"] = g;
                if (fbi_axes.empty())
                    throw crlab::schema_error("--generator needs --axes lo:hi:count,...");
                Json axes = Json::array();
                std::stringstream ss(fbi_axes);
                std::string one;
                while (std::getline(ss, one, ',')) {
                    std::stringstream ps(one);
                    std::string lo, hi, cnt;
                    if (!std::getline(ps, lo, ':') || !std::getline(ps, hi, ':') ||
                        !std::getline(ps, cnt))
                        throw crlab::schema_error("axes must look like lo:hi:count");
                    Json a = Json::object();
                    try {
                        a["min"] = std::stod(lo);
                        a["max"] = std::stod(hi);
                        a["count"] = std::stoll(cnt);
                    } catch (const std::exception&) {
                        throw crlab::schema_error("axes must look like lo:hi:count");
                    }
                    axes.push_back(a);
                }
                task["axes"] = axes;
            } else {
                throw crlab::schema_error("fbi needs --input or --generator");
            }
            if (!fbi_probe.empty()) task["probe"] = split_doubles(fbi_probe);
            if (!fbi_dirs.empty()) {
                Json dirs = Json::array();
                for (const std::string& d : fbi_dirs) dirs.push_back(split_doubles(d));
                task["directions"] = dirs;
            } else if (fbi_n_dirs > 0) {
                task["directions"] = fbi_n_dirs;
            }
            task["scales"] = fbi_scales;
            task["damping"] = fbi_damping;
            task["cutoff"] = fbi_cutoff;
            Json m = Json::object();
            m["tasks"] = Json::array({task});
            return run_json(std::move(m), fbi_common);
        }
        if (*cmd_vi) {
            Json task = Json::object();
            task["op"] = "verify-identities";
            task["dims"] = vi_dims;
            task["trials"] = vi_trials;
            Json m = Json::object();
            m["tasks"] = Json::array({task});
            return run_json(std::move(m), vi_common);
        }
    } catch (const crlab::schema_error& e) {
        std::cerr << "crlab: " << e.what() << "\n";
        return 2;
    } catch (const crlab::internal_error& e) {
        std::cerr << "crlab: internal error: " << e.what() << "\n";
        return 3;
    } catch (const crlab::input_error& e) {
        std::cerr << "crlab: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "crlab: internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
