#include "flp/serialize.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace flp {

using nlohmann::json;

namespace {

double require_number(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj[key].is_number()) {
        throw std::invalid_argument(std::string("distribution spec: missing numeric field '") + key + "'");
    }
    return obj[key].get<double>();
}

}  // namespace

DistPtr parse_distribution(const json& spec, const std::string& base_dir) {
    if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string()) {
        throw std::invalid_argument("distribution spec: object with string 'kind' required");
    }
    std::string kind = spec["kind"].get<std::string>();
    if (kind == "uniform") {
        return make_uniform(require_number(spec, "lo"), require_number(spec, "hi"));
    }
    if (kind == "gaussian") {
        return make_gaussian(require_number(spec, "mean"), require_number(spec, "std"));
    }
    if (kind == "exponential") {
        return make_exponential(require_number(spec, "rate"));
    }
    if (kind == "affine") {
        if (!spec.contains("base")) {
            throw std::invalid_argument("affine spec: 'base' required");
        }
        return affine_pushforward(parse_distribution(spec["base"], base_dir),
                                  require_number(spec, "scale"),
                                  require_number(spec, "shift"));
    }
    if (kind == "empirical") {
        if (!spec.contains("path") || !spec["path"].is_string()) {
            throw std::invalid_argument("empirical spec: string 'path' required");
        }
        std::filesystem::path p(spec["path"].get<std::string>());
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        return make_empirical(read_positions_csv(p.string()));
    }
    throw std::invalid_argument("distribution spec: unknown kind '" + kind + "'");
}

json to_json(const DiscreteMeasure& m) {
    return json{{"points", m.points()}, {"weights", m.weights()}};
}

json to_json(const Placement& p, double cost) {
    return json{{"facilities", p.facilities}, {"cost", cost}};
}

json to_json(const ProjectionResult& r) {
    return json{{"y", r.y},         {"v", r.v},
                {"weights", r.weights}, {"cost", r.cost},
                {"residual", r.residual}, {"iterations", r.iterations}};
}

json to_json(const RatioEstimate& r) {
    return json{{"mean_mech_cost", r.mean_mech_cost},
                {"mean_opt_cost", r.mean_opt_cost},
                {"ratio", r.ratio},
                {"se_mech", r.se_mech},
                {"se_opt", r.se_opt},
                {"se_ratio", r.se_ratio},
                {"trials", r.trials},
                {"n", r.n},
                {"seed", r.seed}};
}

json to_json(const ConvergenceReport& r) {
    json points = json::array();
    for (const auto& p : r.points) {
        points.push_back(json{{"n", p.n},
                              {"ratio", p.ratio},
                              {"deviation", p.deviation},
                              {"se_ratio", p.se_ratio}});
    }
    json out{{"points", points}, {"limit", r.limit}};
    if (r.slope_defined) {
        out["slope"] = r.slope;
        out["intercept"] = r.intercept;
    } else {
        out["slope"] = nullptr;
        out["intercept"] = nullptr;
    }
    return out;
}

json to_json(const RobustnessReport& r) {
    return json{{"w_infinity", r.w_inf},
                {"w1", r.w1},
                {"projection_cost", r.projection_cost},
                {"bound", r.bound},
                {"measured", r.measured},
                {"mc_ratio", r.mc_ratio},
                {"v_tilde", r.v_tilde},
                {"truncated", r.truncated}};
}

std::string to_csv(const ConvergenceReport& r) {
    std::ostringstream out;
    out.precision(17);
    out << "n,ratio,deviation,se_ratio\n";
    for (const auto& p : r.points) {
        out << p.n << ',' << p.ratio << ',' << p.deviation << ',' << p.se_ratio
            << '\n';
    }
    return out.str();
}

std::vector<double> read_positions_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::vector<double> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            out.push_back(std::stod(line));
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed value in " + path + ": " + line);
        }
    }
    return out;
}

void write_positions_csv(const std::string& path,
                         const std::vector<double>& values) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open file for writing: " + path);
    out.precision(17);
    for (double v : values) out << v << '\n';
}

}  // namespace flp
