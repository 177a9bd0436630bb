#include "crlab/manifest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "crlab/detid.hpp"
#include "crlab/fbi.hpp"
#include "crlab/jet.hpp"
#include "crlab/normalize.hpp"

namespace crlab {

namespace {

constexpr const char* kVersion = "0.1.0";

[[noreturn]] void bad(const std::string& msg) { throw schema_error("manifest: " + msg); }

std::string json_kind(const Json& v) {
    if (v.is_object()) return "object";
    if (v.is_array()) return "array";
    if (v.is_string()) return "string";
    if (v.is_boolean()) return "boolean";
    if (v.is_null()) return "null";
    return "number";
}

const Json& need(const Json& obj, const std::string& key, const std::string& ctx) {
    if (!obj.is_object() || !obj.contains(key)) bad(ctx + " needs a \"" + key + "\" field");
    return obj.at(key);
}

void check_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& ctx) {
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            bad(ctx + " has an unrecognized field \"" + item.key() + "\"");
}

long long get_integer(const Json& v, const std::string& ctx) {
    if (!v.is_number_integer()) bad(ctx + " must be an integer, not " + json_kind(v));
    return v.get<long long>();
}

double get_number(const Json& v, const std::string& ctx) {
    if (!v.is_number()) bad(ctx + " must be a number, not " + json_kind(v));
    return v.get<double>();
}

std::string get_string(const Json& v, const std::string& ctx) {
    if (!v.is_string()) bad(ctx + " must be a string, not " + json_kind(v));
    return v.get<std::string>();
}

Rational rational_from_json(const Json& v, const std::string& ctx) {
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_string()) {
        try {
            return parse_rational(v.get<std::string>());
        } catch (const input_error& e) {
            bad(ctx + ": " + e.what());
        }
    }
    bad(ctx + " must be an integer or a rational string \"a/b\", not " + json_kind(v));
}

GaussianRational gaussian_from_json(const Json& v, const std::string& ctx) {
    if (v.is_object()) {
        check_keys(v, {"re", "im"}, ctx);
        Rational re = v.contains("re") ? rational_from_json(v.at("re"), ctx + ".re") : Rational(0);
        Rational im = v.contains("im") ? rational_from_json(v.at("im"), ctx + ".im") : Rational(0);
        return {re, im};
    }
    return GaussianRational(rational_from_json(v, ctx));
}

// ---------------------------------------------------------------------------
// Objects declared by the manifest, built once and shared by all tasks.

struct BuiltObjects {
    uint64_t seed = 42;
    int n_src = 0;
    int n_tgt = 0;
    std::optional<EmbeddedManifold> source, target;
    std::optional<CRMap> map;
    std::map<std::string, PointAssignment> points;
    std::map<std::string, Letter> point_letter;
    NormalizationTolerances tol;
    Json echo;
};

std::vector<Poly> parse_defining(const Json& arr, const VarSpace& sp, const std::string& ctx) {
    if (!arr.is_array() || arr.empty()) bad(ctx + " must be a nonempty array of strings");
    std::vector<Poly> out;
    for (size_t k = 0; k < arr.size(); ++k) {
        const std::string text = get_string(arr.at(k), ctx + "[" + std::to_string(k) + "]");
        try {
            out.push_back(parse_poly(text, sp));
        } catch (const input_error& e) {
            bad(ctx + "[" + std::to_string(k) + "]: " + e.what());
        }
    }
    return out;
}

PointAssignment parse_point(const Json& coords, int n_src, int n_tgt, Letter& letter_out,
                            const std::string& ctx) {
    if (!coords.is_object() || coords.empty()) bad(ctx + " must be a nonempty object of coordinates");
    PointAssignment p;
    bool first = true;
    for (const auto& item : coords.items()) {
        const std::string& name = item.key();
        VarKind kind;
        int dim;
        if (!name.empty() && name[0] == 'z') {
            kind = VarKind::Z;
            dim = n_src;
        } else if (!name.empty() && name[0] == 'w') {
            kind = VarKind::W;
            dim = n_tgt;
        } else {
            bad(ctx + ": coordinate \"" + name + "\" must be z<k> or w<k>");
        }
        int idx = 0;
        auto res = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
        if (res.ec != std::errc{} || res.ptr != name.data() + name.size() || idx < 1)
            bad(ctx + ": coordinate \"" + name + "\" must be z<k> or w<k>");
        if (idx > dim)
            bad(ctx + ": coordinate \"" + name + "\" exceeds the declared dimension " +
                std::to_string(dim));
        Letter letter = kind == VarKind::Z ? Letter::Z : Letter::W;
        if (first) {
            letter_out = letter;
            first = false;
        } else if (letter != letter_out) {
            bad(ctx + " mixes z and w coordinates");
        }
        p.set(Variable{kind, static_cast<uint16_t>(idx)},
              gaussian_from_json(item.value(), ctx + "." + name));
    }
    const int dim = letter_out == Letter::Z ? n_src : n_tgt;
    for (int k = 1; k <= dim; ++k) {
        Variable v{letter_out == Letter::Z ? VarKind::Z : VarKind::W, static_cast<uint16_t>(k)};
        if (!p.has(v)) bad(ctx + " is missing coordinate " + var_name(v));
    }
    return p;
}

Json point_echo(const PointAssignment& p) {
    Json out = Json::object();
    for (const auto& [v, val] : p.stored()) out[var_name(v)] = complex_json(val);
    return out;
}

BuiltObjects build_objects(const Json& m) {
    BuiltObjects obj;
    check_keys(m, {"seed", "variables", "source", "target", "map", "points", "tolerances", "tasks"},
               "manifest");

    if (m.contains("seed")) {
        long long s = get_integer(m.at("seed"), "seed");
        if (s < 0) bad("seed must be nonnegative");
        obj.seed = static_cast<uint64_t>(s);
    }

    if (m.contains("variables")) {
        const Json& v = m.at("variables");
        if (!v.is_object()) bad("variables must be an object");
        check_keys(v, {"source", "target"}, "variables");
        if (v.contains("source")) {
            long long n = get_integer(v.at("source"), "variables.source");
            if (n < 1 || n > 16) bad("variables.source must be between 1 and 16");
            obj.n_src = static_cast<int>(n);
        }
        if (v.contains("target")) {
            long long n = get_integer(v.at("target"), "variables.target");
            if (n < 1 || n > 16) bad("variables.target must be between 1 and 16");
            obj.n_tgt = static_cast<int>(n);
        }
    }

    try {
        if (m.contains("source")) {
            if (obj.n_src == 0) bad("a source manifold needs variables.source");
            obj.source.emplace(Letter::Z, obj.n_src,
                               parse_defining(m.at("source"), VarSpace::source(obj.n_src), "source"));
        }
        if (m.contains("target")) {
            if (obj.n_tgt == 0) bad("a target manifold needs variables.target");
            obj.target.emplace(Letter::W, obj.n_tgt,
                               parse_defining(m.at("target"), VarSpace::target(obj.n_tgt), "target"));
        }
        if (m.contains("map")) {
            if (!obj.source || !obj.target) bad("a map needs both source and target manifolds");
            std::vector<Poly> comps =
                parse_defining(m.at("map"), VarSpace::source(obj.n_src), "map");
            obj.map.emplace(*obj.source, *obj.target, std::move(comps));
        }
    } catch (const schema_error&) {
        throw;
    } catch (const input_error& e) {
        bad(e.what());
    }

    if (m.contains("points")) {
        const Json& pts = m.at("points");
        if (!pts.is_object()) bad("points must be an object of named points");
        for (const auto& item : pts.items()) {
            Letter letter = Letter::Z;
            obj.points.emplace(item.key(), parse_point(item.value(), obj.n_src, obj.n_tgt, letter,
                                                       "points." + item.key()));
            obj.point_letter.emplace(item.key(), letter);
        }
    }

    if (m.contains("tolerances")) {
        const Json& t = m.at("tolerances");
        if (!t.is_object()) bad("tolerances must be an object");
        check_keys(t, {"unitarity", "zero_block", "invertibility"}, "tolerances");
        if (t.contains("unitarity")) obj.tol.unitarity = get_number(t.at("unitarity"), "tolerances.unitarity");
        if (t.contains("zero_block"))
            obj.tol.zero_block = get_number(t.at("zero_block"), "tolerances.zero_block");
        if (t.contains("invertibility"))
            obj.tol.invertibility = get_number(t.at("invertibility"), "tolerances.invertibility");
        for (double v : {obj.tol.unitarity, obj.tol.zero_block, obj.tol.invertibility})
            if (!(v > 0)) bad("tolerances must be positive");
    }

    obj.echo = Json::object();
    if (obj.n_src || obj.n_tgt) {
        Json dims = Json::object();
        if (obj.n_src) dims["source"] = obj.n_src;
        if (obj.n_tgt) dims["target"] = obj.n_tgt;
        obj.echo["variables"] = dims;
    }
    auto echo_defining = [](const EmbeddedManifold& man) {
        Json arr = Json::array();
        for (const Poly& p : man.defining()) arr.push_back(to_string(p));
        return arr;
    };
    if (obj.source) obj.echo["source"] = echo_defining(*obj.source);
    if (obj.target) obj.echo["target"] = echo_defining(*obj.target);
    if (obj.map) {
        Json arr = Json::array();
        for (const Poly& c : obj.map->components()) arr.push_back(to_string(c));
        obj.echo["map"] = arr;
    }
    if (!obj.points.empty()) {
        Json pts = Json::object();
        for (const auto& [name, p] : obj.points) pts[name] = point_echo(p);
        obj.echo["points"] = pts;
    }
    return obj;
}

// ---------------------------------------------------------------------------
// Task validation: all structure and references are checked before any task
// runs, so a schema problem never yields a half-executed report.

const std::set<std::string> kOps = {"rank",      "nondegen", "levi",
                                   "normalize", "fbi",      "verify-identities"};

void require_source_point(const BuiltObjects& obj, const Json& task, const std::string& ctx) {
    const std::string name = get_string(need(task, "point", ctx), ctx + ".point");
    auto it = obj.points.find(name);
    if (it == obj.points.end()) bad(ctx + " names an undeclared point \"" + name + "\"");
    if (obj.point_letter.at(name) != Letter::Z)
        bad(ctx + ": point \"" + name + "\" must use source coordinates");
}

std::vector<GridAxis> axes_from_json(const Json& arr, const std::string& ctx) {
    if (!arr.is_array() || arr.empty()) bad(ctx + " must be a nonempty array");
    std::vector<GridAxis> axes;
    for (size_t k = 0; k < arr.size(); ++k) {
        const Json& a = arr.at(k);
        const std::string actx = ctx + "[" + std::to_string(k) + "]";
        if (!a.is_object()) bad(actx + " must be an object");
        check_keys(a, {"min", "max", "count"}, actx);
        GridAxis axis;
        axis.lo = get_number(need(a, "min", actx), actx + ".min");
        axis.hi = get_number(need(a, "max", actx), actx + ".max");
        long long n = get_integer(need(a, "count", actx), actx + ".count");
        if (n < 2) bad(actx + ".count must be at least 2");
        axis.count = static_cast<size_t>(n);
        axes.push_back(axis);
    }
    return axes;
}

std::vector<double> scales_from_json(const Json& v, const std::string& ctx) {
    std::vector<double> scales;
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        auto colon = s.find(':');
        if (colon == std::string::npos) bad(ctx + " range must look like \"4:256\"");
        double lo = 0, hi = 0;
        try {
            lo = std::stod(s.substr(0, colon));
            hi = std::stod(s.substr(colon + 1));
        } catch (const std::exception&) {
            bad(ctx + " range must look like \"4:256\"");
        }
        if (!(lo > 0) || !(hi >= lo)) bad(ctx + " range needs 0 < lo <= hi");
        for (double t = lo; t <= hi * (1 + 1e-12); t *= 2) scales.push_back(t);
        if (std::abs(scales.back() - hi) > 1e-9 * hi)
            bad(ctx + " range must reach its upper end by doubling");
    } else if (v.is_array()) {
        for (size_t k = 0; k < v.size(); ++k)
            scales.push_back(get_number(v.at(k), ctx + "[" + std::to_string(k) + "]"));
    } else {
        bad(ctx + " must be a \"lo:hi\" doubling range or an array of numbers");
    }
    return scales;
}

void validate_task(const BuiltObjects& obj, const Json& task, size_t index) {
    const std::string ctx = "tasks[" + std::to_string(index) + "]";
    if (!task.is_object()) bad(ctx + " must be an object");
    const std::string op = get_string(need(task, "op", ctx), ctx + ".op");
    if (!kOps.count(op)) bad(ctx + ": unknown op \"" + op + "\"");

    if (op == "rank" || op == "nondegen" || op == "normalize") {
        if (!obj.map) bad(ctx + " (" + op + ") needs a declared map");
        require_source_point(obj, task, ctx);
        const char* key = op == "nondegen" ? "max_order" : "order";
        long long l = get_integer(need(task, key, ctx), ctx + "." + key);
        if (l < 0 || l > 32) bad(ctx + "." + key + " must be between 0 and 32");
        if (op != "rank" && l < 1) bad(ctx + "." + key + " must be at least 1");
        check_keys(task, {"op", "point", key}, ctx);
    } else if (op == "levi") {
        const std::string which = get_string(need(task, "object", ctx), ctx + ".object");
        if (which != "source" && which != "target")
            bad(ctx + ".object must be \"source\" or \"target\"");
        if (which == "source" && !obj.source) bad(ctx + " needs a declared source manifold");
        if (which == "target" && !obj.target) bad(ctx + " needs a declared target manifold");
        if (task.contains("point")) {
            const std::string name = get_string(task.at("point"), ctx + ".point");
            auto it = obj.point_letter.find(name);
            if (it == obj.point_letter.end())
                bad(ctx + " names an undeclared point \"" + name + "\"");
            Letter want = which == "source" ? Letter::Z : Letter::W;
            if (it->second != want)
                bad(ctx + ": point \"" + name + "\" uses the wrong coordinate letter for " + which);
        }
        check_keys(task, {"op", "object", "point"}, ctx);
    } else if (op == "fbi") {
        check_keys(task, {"op", "input", "generator", "axes", "probe", "directions", "scales",
                          "damping", "cutoff"},
                   ctx);
        const bool file = task.contains("input");
        const bool gen = task.contains("generator");
        if (file == gen) bad(ctx + " needs exactly one of \"input\" or \"generator\"");
        if (file) {
            get_string(task.at("input"), ctx + ".input");
            if (task.contains("axes")) bad(ctx + ": axes come from the input file");
        } else {
            const Json& g = task.at("generator");
            if (!g.is_object()) bad(ctx + ".generator must be an object");
            check_keys(g, {"name", "params"}, ctx + ".generator");
            get_string(need(g, "name", ctx + ".generator"), ctx + ".generator.name");
            if (g.contains("params") && !g.at("params").is_array())
                bad(ctx + ".generator.params must be an array of numbers");
            axes_from_json(need(task, "axes", ctx), ctx + ".axes");
        }
        if (task.contains("directions")) {
            const Json& d = task.at("directions");
            if (d.is_number_integer()) {
                if (d.get<long long>() < 1) bad(ctx + ".directions must be positive");
            } else if (d.is_array()) {
                for (size_t k = 0; k < d.size(); ++k) {
                    const Json& row = d.at(k);
                    if (!row.is_array()) bad(ctx + ".directions entries must be vectors");
                    for (size_t c = 0; c < row.size(); ++c)
                        get_number(row.at(c), ctx + ".directions entries");
                }
            } else {
                bad(ctx + ".directions must be a count or an array of vectors");
            }
        }
        if (task.contains("scales")) scales_from_json(task.at("scales"), ctx + ".scales");
        if (task.contains("damping")) get_number(task.at("damping"), ctx + ".damping");
        if (task.contains("cutoff")) get_number(task.at("cutoff"), ctx + ".cutoff");
        if (task.contains("probe")) {
            if (!task.at("probe").is_array()) bad(ctx + ".probe must be an array of numbers");
            for (size_t k = 0; k < task.at("probe").size(); ++k)
                get_number(task.at("probe").at(k), ctx + ".probe entries");
        }
    } else if (op == "verify-identities") {
        check_keys(task, {"op", "dims", "trials"}, ctx);
        if (task.contains("dims")) {
            const Json& d = task.at("dims");
            if (d.is_string()) {
                const std::string s = d.get<std::string>();
                if (s.find("..") == std::string::npos)
                    bad(ctx + ".dims range must look like \"3..6\"");
            } else if (d.is_array()) {
                for (size_t k = 0; k < d.size(); ++k) {
                    long long dim = get_integer(d.at(k), ctx + ".dims entries");
                    if (dim < 3) bad(ctx + ".dims entries must be at least 3");
                }
            } else {
                bad(ctx + ".dims must be an \"a..b\" range or an array of integers");
            }
        }
        if (task.contains("trials")) {
            long long t = get_integer(task.at("trials"), ctx + ".trials");
            if (t < 1) bad(ctx + ".trials must be positive");
        }
    }
}

// ---------------------------------------------------------------------------
// Task runners. Precondition failures throw input_error and mark the task
// failed; everything else returns a results object.

Json inertia_json(const Inertia& s) {
    Json out = Json::object();
    out["positive"] = s.positive;
    out["negative"] = s.negative;
    out["zero"] = s.zero;
    return out;
}

Json qmat_json(const QMat& m) {
    Json rows = Json::array();
    for (size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (size_t c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

Json cmat_json(const Eigen::MatrixXcd& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(float_complex_json(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

Json run_rank(const BuiltObjects& obj, const Json& task) {
    const std::string name = task.at("point").get<std::string>();
    const PointAssignment& p = obj.points.at(name);
    const unsigned order = static_cast<unsigned>(task.at("order").get<long long>());
    JetTable table(*obj.map, p);
    table.require_usable_at(p);
    Json out = Json::object();
    out["point"] = name;
    out["width"] = table.width();
    Json ranks = Json::array();
    for (unsigned l = 0; l <= order; ++l) ranks.push_back(table.rank_at(p, l));
    out["ranks"] = ranks;
    return out;
}

Json run_nondegen(const BuiltObjects& obj, const Json& task) {
    const std::string name = task.at("point").get<std::string>();
    const PointAssignment& p = obj.points.at(name);
    const unsigned max_l = static_cast<unsigned>(task.at("max_order").get<long long>());
    JetTable table(*obj.map, p);
    JetSpanReport rep = jet_span_report(table, p, max_l);
    Json out = Json::object();
    out["point"] = name;
    out["max_order"] = max_l;
    out["width"] = rep.width;
    Json ranks = Json::array();
    for (size_t r : rep.ranks) ranks.push_back(r);
    out["ranks"] = ranks;
    out["finite"] = rep.nondegeneracy_order.has_value();
    out["order"] = rep.nondegeneracy_order ? Json(*rep.nondegeneracy_order) : Json(nullptr);
    return out;
}

Json run_levi(const BuiltObjects& obj, const Json& task) {
    const std::string which = task.at("object").get<std::string>();
    const EmbeddedManifold& man = which == "source" ? *obj.source : *obj.target;
    PointAssignment p;
    std::string point_name = "(origin)";
    if (task.contains("point")) {
        point_name = task.at("point").get<std::string>();
        p = obj.points.at(point_name);
    } else {
        for (int k = 1; k <= man.ambient_dim(); ++k) p.set(man.z(k), GaussianRational());
    }
    man.require_on_manifold(p);
    auto sigmas = characteristic_space(man, p);
    Json out = Json::object();
    out["object"] = which;
    out["point"] = point_name;
    out["point_values"] = point_echo(p);
    Json dirs = Json::array();
    for (const Covector& sigma : sigmas) {
        QMat h = levi_form(man, p, sigma);
        Json one = Json::object();
        one["covector"] = sigma.str();
        one["matrix"] = qmat_json(h);
        one["signature"] = inertia_json(signature(h));
        one["signature_negated"] = inertia_json(signature(levi_form(man, p, -sigma)));
        dirs.push_back(one);
    }
    out["characteristic"] = dirs;
    return out;
}

Json tolerances_json(const NormalizationTolerances& tol) {
    Json out = Json::object();
    out["unitarity"] = format_double(tol.unitarity);
    out["zero_block"] = format_double(tol.zero_block);
    out["invertibility"] = format_double(tol.invertibility);
    return out;
}

Json run_normalize(const BuiltObjects& obj, const Json& task) {
    const std::string name = task.at("point").get<std::string>();
    const PointAssignment& p = obj.points.at(name);
    const unsigned order = static_cast<unsigned>(task.at("order").get<long long>());
    JetTable table(*obj.map, p);
    NormalizationResult res = normalize_frame(table, p, order, obj.tol);
    const double law = transformation_law_residual(table, p, res);
    Json out = Json::object();
    out["point"] = name;
    out["order"] = order;
    Json frame = Json::array();
    for (const MultiIndex& mi : res.frame) frame.push_back(mi_str(mi));
    out["frame"] = frame;
    Json ext = Json::array();
    for (const MultiIndex& mi : res.extension) ext.push_back(mi_str(mi));
    out["extension"] = ext;
    out["unitary"] = cmat_json(res.a);
    out["b_block"] = cmat_json(res.b_block);
    out["unitarity_residual"] = format_double(res.unitarity_residual);
    out["zero_block_residual"] = format_double(res.zero_block_residual);
    out["smallest_singular_value"] = format_double(res.smallest_singular_value);
    out["model_row_residual"] = format_double(res.model_row_residual);
    out["transformation_law_residual"] = format_double(law);
    out["tolerances"] = tolerances_json(res.tolerances);
    out["pass"] = res.pass && law <= obj.tol.zero_block;
    return out;
}

std::complex<double> sample_from_json(const Json& v, const std::string& ctx) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_object()) {
        double re = v.contains("re") ? get_number(v.at("re"), ctx + ".re") : 0.0;
        double im = v.contains("im") ? get_number(v.at("im"), ctx + ".im") : 0.0;
        return {re, im};
    }
    throw input_error(ctx + " must be a number or {re, im}");
}

SampledFunction load_samples_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot read sample file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    Json j;
    try {
        j = Json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw input_error("sample file " + path + " is not valid JSON: " + e.what());
    }
    try {
        std::vector<GridAxis> axes = axes_from_json(need(j, "axes", "sample file"), "axes");
        if (j.contains("generator")) {
            const Json& g = j.at("generator");
            std::vector<double> params;
            if (g.contains("params"))
                for (size_t k = 0; k < g.at("params").size(); ++k)
                    params.push_back(get_number(g.at("params").at(k), "generator.params"));
            return make_builtin(get_string(need(g, "name", "generator"), "generator.name"), params,
                                axes);
        }
        const Json& samples = need(j, "samples", "sample file");
        if (!samples.is_array()) throw input_error("sample file: samples must be an array");
        std::vector<std::complex<double>> values;
        values.reserve(samples.size());
        for (size_t k = 0; k < samples.size(); ++k)
            values.push_back(sample_from_json(samples.at(k), "samples[" + std::to_string(k) + "]"));
        return SampledFunction(axes, std::move(values));
    } catch (const schema_error& e) {
        throw input_error("sample file " + path + ": " + e.what());
    }
}

Json profile_json(const DecayProfile& p) {
    Json out = Json::object();
    Json dir = Json::array();
    for (double d : p.direction) dir.push_back(format_double(d));
    out["direction"] = dir;
    out["classification"] = to_string(p.classification);
    out["poly_order"] = format_double(p.poly_order);
    out["exp_rate"] = format_double(p.exp_rate);
    out["exponential_fit_preferred"] = p.exponential_fit_preferred;
    out["floor"] = p.floor_flag;
    out["used_samples"] = p.used_samples;
    Json mags = Json::array();
    for (double m : p.magnitudes) mags.push_back(format_double(m));
    out["magnitudes"] = mags;
    return out;
}

Json run_fbi(const Json& task) {
    SampledFunction u = [&] {
        if (task.contains("input")) return load_samples_file(task.at("input").get<std::string>());
        const Json& g = task.at("generator");
        std::vector<double> params;
        if (g.contains("params"))
            for (size_t k = 0; k < g.at("params").size(); ++k)
                params.push_back(get_number(g.at("params").at(k), "generator.params"));
        return make_builtin(g.at("name").get<std::string>(), params,
                            axes_from_json(task.at("axes"), "axes"));
    }();
    const size_t dim = u.dim();

    std::vector<double> probe(dim, 0.0);
    if (task.contains("probe")) {
        const Json& pr = task.at("probe");
        if (pr.size() != dim) throw input_error("probe dimension does not match the grid");
        for (size_t k = 0; k < dim; ++k) probe[k] = pr.at(k).get<double>();
    }

    std::vector<std::vector<double>> directions;
    const Json dflt = Json(16);
    const Json& djson = task.contains("directions") ? task.at("directions") : dflt;
    if (djson.is_number_integer()) {
        if (dim != 2)
            throw input_error("a direction count needs a two-dimensional grid; "
                              "give explicit direction vectors instead");
        const long long n = djson.get<long long>();
        for (long long k = 0; k < n; ++k) {
            const double th = 2.0 * 3.14159265358979323846 * static_cast<double>(k) /
                              static_cast<double>(n);
            directions.push_back({std::cos(th), std::sin(th)});
        }
    } else {
        for (size_t k = 0; k < djson.size(); ++k) {
            const Json& row = djson.at(k);
            if (!row.is_array() || row.size() != dim)
                throw input_error("each direction must list one component per axis");
            std::vector<double> d;
            for (size_t c = 0; c < dim; ++c) d.push_back(row.at(c).get<double>());
            directions.push_back(std::move(d));
        }
    }

    std::vector<double> scales = task.contains("scales")
                                     ? scales_from_json(task.at("scales"), "scales")
                                     : std::vector<double>{4, 8, 16, 32, 64, 128, 256};
    const double damping = task.contains("damping") ? task.at("damping").get<double>() : 1.0;
    Cutoff eta{task.contains("cutoff") ? task.at("cutoff").get<double>() : 0.5};

    ConeReport rep = cone_report(u, eta, probe, directions, scales, damping);

    Json out = Json::object();
    Json axes = Json::array();
    for (const GridAxis& a : u.axes()) {
        Json one = Json::object();
        one["min"] = format_double(a.lo);
        one["max"] = format_double(a.hi);
        one["count"] = a.count;
        axes.push_back(one);
    }
    out["axes"] = axes;
    Json pr = Json::array();
    for (double x : probe) pr.push_back(format_double(x));
    out["probe"] = pr;
    Json sc = Json::array();
    for (double s : scales) sc.push_back(format_double(s));
    out["scales"] = sc;
    out["damping"] = format_double(damping);
    out["cutoff_radius"] = format_double(eta.r);
    Json profs = Json::array();
    for (const DecayProfile& p : rep.profiles) profs.push_back(profile_json(p));
    out["directions"] = profs;
    Json gens = Json::array();
    for (const auto& g : rep.cone_generators) {
        Json row = Json::array();
        for (double x : g) row.push_back(format_double(x));
        gens.push_back(row);
    }
    out["cone_generators"] = gens;
    return out;
}

Json run_verify_identities(const BuiltObjects& obj, const Json& task, bool& all_ok) {
    std::vector<int> dims;
    if (!task.contains("dims")) {
        dims = {3, 4, 5, 6};
    } else if (task.at("dims").is_string()) {
        const std::string s = task.at("dims").get<std::string>();
        const auto pos = s.find("..");
        int lo = 0, hi = 0;
        try {
            lo = std::stoi(s.substr(0, pos));
            hi = std::stoi(s.substr(pos + 2));
        } catch (const std::exception&) {
            throw input_error("dims range must look like \"3..6\"");
        }
        if (lo < 3 || hi < lo) throw input_error("dims range needs 3 <= lo <= hi");
        for (int d = lo; d <= hi; ++d) dims.push_back(d);
    } else {
        for (size_t k = 0; k < task.at("dims").size(); ++k)
            dims.push_back(static_cast<int>(task.at("dims").at(k).get<long long>()));
    }
    const int trials =
        task.contains("trials") ? static_cast<int>(task.at("trials").get<long long>()) : 1000;

    Rng rng(obj.seed);
    Json out = Json::object();
    Json per = Json::array();
    all_ok = true;
    for (int d : dims) {
        IdentityTrialSummary s = run_identity_trials(d, trials, rng);
        Json one = Json::object();
        one["dim"] = s.dim;
        one["trials"] = s.trials;
        one["bordered_failures"] = s.bordered_failures;
        one["condensation_failures"] = s.condensation_failures;
        one["display_failures"] = s.display_failures;
        one["dependence_failures"] = s.dependence_failures;
        one["all_equal"] = s.all_equal();
        all_ok = all_ok && s.all_equal();
        per.push_back(one);
    }
    out["dimensions"] = per;
    out["all_equal"] = all_ok;
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string format_double(double x) {
    if (x == 0.0) x = 0.0;  // collapse negative zero
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

Json complex_json(const GaussianRational& z) {
    Json out = Json::object();
    out["re"] = z.re().str();
    out["im"] = z.im().str();
    return out;
}

Json float_complex_json(std::complex<double> z) {
    Json out = Json::object();
    out["re"] = format_double(z.real());
    out["im"] = format_double(z.imag());
    return out;
}

IdentityTrialSummary run_identity_trials(int dim, int trials, Rng& rng) {
    if (dim < 3) throw input_error("identity trials need dimension at least 3");
    if (trials < 1) throw input_error("identity trials need a positive trial count");
    IdentityTrialSummary sum;
    sum.dim = dim;
    sum.trials = trials;

    auto random_mat = [&](bool zero_corner) {
        QMat b(static_cast<size_t>(dim), static_cast<size_t>(dim));
        for (size_t r = 0; r < b.rows(); ++r)
            for (size_t c = 0; c < b.cols(); ++c) b(r, c) = rng.gaussian(3, 3);
        if (zero_corner) b(0, 0) = GaussianRational();
        return b;
    };

    for (int t = 0; t < trials; ++t) {
        const QMat b = random_mat(false);

        // Two-by-two identity on bordered minors, one random pair of index
        // sets of size dim-2 inside {1, ..., dim-1}.
        const int drop_i = static_cast<int>(rng.int_in(1, dim - 1));
        const int drop_j = static_cast<int>(rng.int_in(1, dim - 1));
        std::vector<int> i_set, j_set;
        for (int k = 1; k <= dim - 1; ++k) {
            if (k != drop_i) i_set.push_back(k);
            if (k != drop_j) j_set.push_back(k);
        }
        if (!bordered_minor_identity(b, i_set, j_set).equal) ++sum.bordered_failures;

        // Condensation, forcing the zero-corner branch on every third trial.
        const QMat c = t % 3 == 2 ? random_mat(true) : b;
        if (!condensation_identity(c).equal) ++sum.condensation_failures;

        if (dim == 3) {
            for (const BorderedDisplay& d : all_bordered_displays(b))
                if (!d.check.equal || !d.matches_entry_form) ++sum.display_failures;
        }

        // Dependence certificate over a nonsingular base.
        QMat base = b;
        while (det_bareiss(base).is_zero()) base = random_mat(false);
        std::vector<GaussianRational> target(static_cast<size_t>(dim));
        for (auto& x : target) x = rng.gaussian(3, 3);
        DependenceResult dep = dependence_certificate(base, target);
        bool ok = dep.coefficients.size() == static_cast<size_t>(dim);
        if (ok) {
            for (size_t r = 0; r < base.rows() && ok; ++r) {
                GaussianRational acc;
                for (size_t k = 0; k < base.cols(); ++k) acc += base(r, k) * dep.coefficients[k];
                ok = acc == target[r];
            }
        }
        bool target_zero = true;
        for (const auto& x : target) target_zero = target_zero && x.is_zero();
        if (dep.is_zero)
            ok = ok && target_zero;
        else
            ok = ok && !dep.witness_columns.empty() && !dep.witness_det.is_zero();
        if (!ok) ++sum.dependence_failures;
    }
    return sum;
}

ManifestRun run_manifest(const Json& manifest) {
    if (!manifest.is_object()) bad("top level must be a JSON object");
    BuiltObjects obj = build_objects(manifest);

    Json tasks = Json::array();
    if (manifest.contains("tasks")) {
        if (!manifest.at("tasks").is_array()) bad("tasks must be an array");
        tasks = manifest.at("tasks");
    }
    for (size_t i = 0; i < tasks.size(); ++i) validate_task(obj, tasks.at(i), i);

    Json report = Json::object();
    report["tool"] = "crlab";
    report["version"] = kVersion;
    report["seed"] = obj.seed;
    report["objects"] = obj.echo;

    int failed = 0;
    Json out_tasks = Json::array();
    for (size_t i = 0; i < tasks.size(); ++i) {
        const Json& task = tasks.at(i);
        const std::string op = task.at("op").get<std::string>();
        Json entry = Json::object();
        entry["index"] = i;
        entry["op"] = op;
        entry["inputs"] = task;
        try {
            Json results;
            bool ok = true;
            if (op == "rank")
                results = run_rank(obj, task);
            else if (op == "nondegen")
                results = run_nondegen(obj, task);
            else if (op == "levi")
                results = run_levi(obj, task);
            else if (op == "normalize")
                results = run_normalize(obj, task);
            else if (op == "fbi")
                results = run_fbi(task);
            else
                results = run_verify_identities(obj, task, ok);
            if (!ok) throw input_error("determinant identity trials reported a mismatch");
            entry["status"] = "ok";
            entry["results"] = results;
        } catch (const schema_error&) {
            throw;
        } catch (const input_error& e) {
            entry["status"] = "failed";
            entry["error"] = e.what();
            ++failed;
        }
        out_tasks.push_back(entry);
    }
    report["tasks"] = out_tasks;
    report["failed_tasks"] = failed;
    return {report, failed > 0 ? 1 : 0};
}

ManifestRun run_manifest_text(const std::string& text) {
    Json parsed;
    try {
        parsed = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        size_t line = 1, col = 1;
        const size_t stop = e.byte > 0 && e.byte <= text.size() ? e.byte - 1 : text.size();
        for (size_t k = 0; k < stop; ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw schema_error("manifest is not valid JSON (line " + std::to_string(line) +
                           ", column " + std::to_string(col) + "): " + e.what());
    }
    return run_manifest(parsed);
}

}  // namespace crlab
