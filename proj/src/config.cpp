#include "pslab/config.hpp"

#include <json.hpp>

#include "pslab/io.hpp"

namespace pslab {

using nlohmann::json;

const char* to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::sigma_sweep: return "sigma-sweep";
        case ExperimentKind::charfn: return "charfn";
        case ExperimentKind::count_fit: return "count-fit";
        case ExperimentKind::fkg_check: return "fkg-check";
    }
    return "?";
}

namespace {

ExperimentKind experiment_from_string(const std::string& s) {
    if (s == "sigma-sweep") return ExperimentKind::sigma_sweep;
    if (s == "charfn") return ExperimentKind::charfn;
    if (s == "count-fit") return ExperimentKind::count_fit;
    if (s == "fkg-check") return ExperimentKind::fkg_check;
    throw config_error("unknown experiment '" + s + "'", "experiment");
}

template <class T>
T require(const json& j, const char* key) {
    if (!j.contains(key)) throw config_error(std::string("missing field '") + key + "'", key);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw config_error(std::string("bad value for '") + key + "': " + e.what(), key);
    }
}

FieldSpec parse_spec(const json& j) {
    const auto kind = require<std::string>(j, "kind");
    const auto n = require<std::int64_t>(j, "n");
    const auto lambda = require<double>(j, "lambda");
    try {
        if (kind == "pattern") {
            const int d = require<int>(j, "d");
            std::vector<Point> shape;
            for (const auto& pt : require<std::vector<std::vector<Coord>>>(j, "pattern"))
                shape.emplace_back(pt.begin(), pt.end());
            return FieldSpec::pattern(d, n, lambda, std::move(shape));
        }
        if (kind == "or") return FieldSpec::or_field(n, lambda);
    } catch (const invalid_spec_error& e) {
        throw config_error(std::string("invalid spec: ") + e.what(), "spec");
    }
    throw config_error("spec kind must be 'pattern' or 'or'", "spec.kind");
}

TestFunction parse_test_function(const json& j) {
    std::vector<TrapezoidProfile> axes;
    for (const auto& breaks : require<std::vector<std::vector<double>>>(j, "axes")) {
        if (breaks.size() != 4)
            throw config_error("each axis needs exactly 4 break abscissas", "f.axes");
        axes.push_back({breaks[0], breaks[1], breaks[2], breaks[3]});
    }
    const double amplitude = require<double>(j, "amplitude");
    try {
        return TestFunction(std::move(axes), amplitude);
    } catch (const precondition_error& e) {
        throw config_error(std::string("invalid test function: ") + e.what(), "f");
    }
}

BoxRegion parse_box(const json& j) {
    try {
        return BoxRegion(require<std::vector<double>>(j, "lo"),
                         require<std::vector<double>>(j, "hi"));
    } catch (const precondition_error& e) {
        throw config_error(std::string("invalid box: ") + e.what(), "box");
    }
}

json spec_to_json(const FieldSpec& spec) {
    json j;
    j["n"] = spec.scale();
    j["lambda"] = spec.intensity();
    if (spec.kind() == FieldKind::pattern) {
        j["kind"] = "pattern";
        j["d"] = spec.dim();
        json pts = json::array();
        for (const Point& p : spec.pattern_set()) pts.push_back(p);
        j["pattern"] = pts;
    } else {
        j["kind"] = "or";
    }
    return j;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what(), "<file>");
    }
    if (!j.is_object()) throw config_error("config must be a JSON object", "<file>");

    const ExperimentKind kind = experiment_from_string(require<std::string>(j, "experiment"));

    if (!j.contains("spec") || !j.at("spec").is_object())
        throw config_error("missing field 'spec'", "spec");
    ExperimentConfig cfg{kind, parse_spec(j.at("spec")), std::nullopt, {}, {}, std::nullopt};

    if (j.contains("f")) cfg.f = parse_test_function(j.at("f"));
    if (j.contains("t_values")) cfg.t_values = require<std::vector<double>>(j, "t_values");
    if (j.contains("n_values")) cfg.n_values = require<std::vector<std::int64_t>>(j, "n_values");
    if (j.contains("box")) cfg.box = parse_box(j.at("box"));
    if (j.contains("replicates")) cfg.replicates = require<std::int64_t>(j, "replicates");
    if (j.contains("master_seed")) cfg.master_seed = require<std::uint64_t>(j, "master_seed");
    if (j.contains("out_dir")) cfg.out_dir = require<std::string>(j, "out_dir");

    if (cfg.replicates < 1) throw config_error("replicates must be positive", "replicates");

    switch (kind) {
        case ExperimentKind::sigma_sweep:
            if (cfg.n_values.empty())
                throw config_error("sigma-sweep needs a nonempty n_values list", "n_values");
            for (std::int64_t n : cfg.n_values)
                if (n < 1) throw config_error("n_values must be positive", "n_values");
            break;
        case ExperimentKind::charfn:
            if (!cfg.f) throw config_error("charfn needs a test function", "f");
            if (cfg.t_values.empty())
                throw config_error("charfn needs a nonempty t_values list", "t_values");
            if (cfg.n_values.empty()) cfg.n_values = {cfg.spec.scale()};
            break;
        case ExperimentKind::count_fit:
        case ExperimentKind::fkg_check:
            if (!cfg.box) throw config_error(std::string(to_string(kind)) + " needs a box", "box");
            if (cfg.box->dim() != cfg.spec.dim())
                throw config_error("box dimension must match the spec", "box");
            break;
    }
    if (cfg.f && cfg.f->dim() != cfg.spec.dim())
        throw config_error("test function dimension must match the spec", "f");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    return parse_config(read_file(path));
}

std::string canonical_config(const ExperimentConfig& config) {
    json j;
    j["experiment"] = to_string(config.experiment);
    j["spec"] = spec_to_json(config.spec);
    if (config.f) {
        json axes = json::array();
        for (const TrapezoidProfile& p : config.f->axes())
            axes.push_back(std::vector<double>{p.a, p.b, p.c, p.e});
        j["f"] = {{"axes", axes}, {"amplitude", config.f->amplitude()}};
    }
    if (!config.t_values.empty()) j["t_values"] = config.t_values;
    if (!config.n_values.empty()) j["n_values"] = config.n_values;
    if (config.box) j["box"] = {{"lo", config.box->lo()}, {"hi", config.box->hi()}};
    j["replicates"] = config.replicates;
    j["master_seed"] = config.master_seed;
    return j.dump();
}

}  // namespace pslab
