#include "levychaos/config.hpp"

#include "json_util.hpp"
#include "levychaos/errors.hpp"
#include "levychaos/kernel_io.hpp"
#include "levychaos/rng.hpp"

#include <filesystem>
#include <fstream>
#include <set>

namespace levychaos {

using nlohmann::json;
using namespace detail;

SymmetricKernel random_kernel(SpacePtr space, int degree, std::uint64_t seed, double scale) {
    const auto entries = space->entries(degree);
    Rng rng(derive_stream_seed(seed, 0));
    std::vector<double> values(entries);
    for (auto& v : values) v = scale * (2.0 * rng.uniform() - 1.0);
    return symmetrize(values, std::move(space), degree);
}

SymmetricKernel make_kernel(const KernelSource& source, SpacePtr space, int degree, const std::string& base_dir,
                            const std::string& pointer) {
    return std::visit(
        [&](const auto& s) -> SymmetricKernel {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, RandomKernelSource>) {
                return random_kernel(space, degree, s.seed, s.scale);
            } else if constexpr (std::is_same_v<T, InlineKernelSource>) {
                if (s.values.size() != space->entries(degree)) {
                    throw ConfigError(child(pointer, "values"), "inline kernel needs " + std::to_string(space->entries(degree)) +
                                                      " values, got " + std::to_string(s.values.size()));
                }
                try {
                    return SymmetricKernel(space, degree, s.values);
                } catch (const DomainError& e) {
                    throw ConfigError(child(pointer, "values"), e.what());
                }
            } else {
                std::filesystem::path p(s.path);
                if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
                auto kernel = load_kernel_file(p.string(), space);
                if (kernel.degree() != degree) {
                    throw ConfigError(p.string(), "kernel degree " + std::to_string(kernel.degree()) +
                                                      " does not match the configured degree " + std::to_string(degree));
                }
                return kernel;
            }
        },
        source);
}

SpacePtr default_space(KernelLimits limits) {
    return make_space(TimeGrid::uniform(1.0, 4), LevyMeasureSpec({{1.0, 2.0}, {-0.5, 2.0}}), limits);
}

VerificationConfig default_config() {
    VerificationConfig cfg;
    cfg.space = default_space();
    return cfg;
}

namespace {

KernelSource kernel_source_from_json(const json& v, const std::string& pointer) {
    if (!v.is_object()) throw ConfigError(pointer, "expected a kernel source object");
    if (v.contains("random")) {
        const auto p = child(pointer, "random");
        const auto& r = v["random"];
        RandomKernelSource src;
        src.seed = as_seed(require(r, "seed", p), child(p, "seed"));
        if (r.contains("scale")) src.scale = as_number(r["scale"], child(p, "scale"));
        return src;
    }
    if (v.contains("values")) return InlineKernelSource{as_number_array(v["values"], child(pointer, "values"))};
    if (v.contains("file")) {
        if (!v["file"].is_string()) throw ConfigError(child(pointer, "file"), "expected a string");
        return FileKernelSource{v["file"].get<std::string>()};
    }
    throw ConfigError(pointer, "kernel source needs one of \"random\", \"values\", \"file\"");
}

std::size_t positive_count(const json& v, const std::string& pointer) {
    const auto n = as_integer(v, pointer);
    if (n < 1) throw ConfigError(pointer, "must be >= 1");
    return static_cast<std::size_t>(n);
}

double positive_number(const json& v, const std::string& pointer) {
    const double x = as_number(v, pointer);
    if (!(x > 0.0)) throw ConfigError(pointer, "must be > 0");
    return x;
}

std::vector<int> degree_list(const json& v, const std::string& pointer) {
    as_array(v, pointer);
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto d = as_integer(v[i], child(pointer, i));
        if (d < 0) throw ConfigError(child(pointer, i), "degrees must be >= 0");
        out.push_back(static_cast<int>(d));
    }
    return out;
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& pointer) {
    for (const auto& [key, value] : obj.items()) {
        if (!known.count(key)) throw ConfigError(child(pointer, key), "unknown field");
    }
}

}  // namespace

VerificationConfig config_from_json(const json& doc, const std::string& base_dir) {
    if (!doc.is_object()) throw ConfigError("/", "config must be a JSON object");
    reject_unknown(doc,
                   {"schema", "space", "limits", "degrees", "kernels", "paths", "samples", "seed", "tolerances",
                    "truncation_order", "isometry", "exponential"},
                   "");
    const auto schema = as_integer(require(doc, "schema", ""), "/schema");
    if (schema != kConfigSchemaVersion) {
        throw ConfigError("/schema", "unsupported schema version " + std::to_string(schema));
    }

    VerificationConfig cfg;
    cfg.base_dir = base_dir;

    KernelLimits limits;
    if (doc.contains("limits")) {
        const auto& l = doc["limits"];
        reject_unknown(l, {"max_degree", "max_points"}, "/limits");
        if (l.contains("max_degree")) {
            const auto d = as_integer(l["max_degree"], "/limits/max_degree");
            if (d < 0) throw ConfigError("/limits/max_degree", "must be >= 0");
            limits.max_degree = static_cast<int>(d);
        }
        if (l.contains("max_points")) limits.max_points = positive_count(l["max_points"], "/limits/max_points");
    }
    try {
        cfg.space = doc.contains("space") ? space_from_json(doc["space"], limits, "/space") : default_space(limits);
    } catch (const ResourceError& e) {
        throw ConfigError("/space", e.what());
    }

    if (doc.contains("degrees")) cfg.degrees = degree_list(doc["degrees"], "/degrees");
    if (doc.contains("kernels")) {
        const auto& list = as_array(doc["kernels"], "/kernels");
        for (std::size_t i = 0; i < list.size(); ++i) cfg.kernels.push_back(kernel_source_from_json(list[i], child("/kernels", i)));
    }
    if (doc.contains("paths")) cfg.paths = positive_count(doc["paths"], "/paths");
    if (doc.contains("samples")) cfg.samples = positive_count(doc["samples"], "/samples");
    if (doc.contains("seed")) cfg.seed = as_seed(doc["seed"], "/seed");
    if (doc.contains("tolerances")) {
        const auto& t = doc["tolerances"];
        reject_unknown(t, {"rel_tol", "stat_sigma"}, "/tolerances");
        if (t.contains("rel_tol")) cfg.tolerances.rel_tol = positive_number(t["rel_tol"], "/tolerances/rel_tol");
        if (t.contains("stat_sigma")) cfg.tolerances.stat_sigma = positive_number(t["stat_sigma"], "/tolerances/stat_sigma");
    }
    if (doc.contains("truncation_order")) {
        cfg.truncation_order = static_cast<int>(positive_count(doc["truncation_order"], "/truncation_order"));
    }
    if (doc.contains("isometry")) {
        const auto& s = doc["isometry"];
        reject_unknown(s, {"mean_degrees", "moment_degrees", "cross_degrees", "kernel_seed", "kernel_scale"}, "/isometry");
        if (s.contains("mean_degrees")) cfg.isometry.mean_degrees = degree_list(s["mean_degrees"], "/isometry/mean_degrees");
        if (s.contains("moment_degrees")) cfg.isometry.moment_degrees = degree_list(s["moment_degrees"], "/isometry/moment_degrees");
        if (s.contains("cross_degrees")) {
            cfg.isometry.cross_degrees.clear();
            const auto& list = as_array(s["cross_degrees"], "/isometry/cross_degrees");
            for (std::size_t i = 0; i < list.size(); ++i) {
                const auto p = child("/isometry/cross_degrees", i);
                const auto pair = degree_list(list[i], p);
                if (pair.size() != 2) throw ConfigError(p, "expected a pair [n, m]");
                cfg.isometry.cross_degrees.emplace_back(pair[0], pair[1]);
            }
        }
        if (s.contains("kernel_seed")) cfg.isometry.kernel_seed = as_seed(s["kernel_seed"], "/isometry/kernel_seed");
        if (s.contains("kernel_scale")) cfg.isometry.kernel_scale = as_number(s["kernel_scale"], "/isometry/kernel_scale");
    }
    if (doc.contains("exponential")) {
        const auto& s = doc["exponential"];
        reject_unknown(s, {"rho", "rms_bound"}, "/exponential");
        if (s.contains("rho")) cfg.exponential.rho = kernel_source_from_json(s["rho"], "/exponential/rho");
        if (s.contains("rms_bound")) cfg.exponential.rms_bound = positive_number(s["rms_bound"], "/exponential/rms_bound");
    }
    validate(cfg);
    return cfg;
}

VerificationConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path, e.what());
    }
    return config_from_json(doc, std::filesystem::path(path).parent_path().string());
}

void validate(const VerificationConfig& cfg) {
    if (!cfg.space) throw ConfigError("/space", "missing state space");
    if (cfg.degrees.empty()) throw ConfigError("/degrees", "need at least one factor degree");
    if (cfg.degrees.size() > static_cast<std::size_t>(kMaxFactors)) throw ConfigError("/degrees", "too many factors");
    if (cfg.kernels.size() > cfg.degrees.size()) throw ConfigError("/kernels", "more kernel sources than degrees");
    const int cap = cfg.space->limits().max_degree;
    int total = 0;
    for (std::size_t k = 0; k < cfg.degrees.size(); ++k) {
        if (cfg.degrees[k] > cap) throw ConfigError(child("/degrees", k), "degree exceeds max_degree " + std::to_string(cap));
        total += cfg.degrees[k];
    }
    if (total > cap) throw ConfigError("/degrees", "total degree " + std::to_string(total) + " exceeds max_degree " + std::to_string(cap));
    if (cfg.paths == 0) throw ConfigError("/paths", "must be >= 1");
    if (cfg.samples < 2) throw ConfigError("/samples", "must be >= 2");
    if (!(cfg.tolerances.rel_tol > 0.0)) throw ConfigError("/tolerances/rel_tol", "must be > 0");
    if (!(cfg.tolerances.stat_sigma > 0.0)) throw ConfigError("/tolerances/stat_sigma", "must be > 0");
    if (cfg.truncation_order < 1 || cfg.truncation_order > cap) {
        throw ConfigError("/truncation_order", "must lie in [1, max_degree = " + std::to_string(cap) + "]");
    }
    for (int n : cfg.isometry.mean_degrees) {
        if (n > cap) throw ConfigError("/isometry/mean_degrees", "degree exceeds max_degree");
    }
    for (int n : cfg.isometry.moment_degrees) {
        if (n > cap) throw ConfigError("/isometry/moment_degrees", "degree exceeds max_degree");
    }
    for (auto [n, m] : cfg.isometry.cross_degrees) {
        if (n > cap || m > cap) throw ConfigError("/isometry/cross_degrees", "degree exceeds max_degree");
    }
    if (!(cfg.exponential.rms_bound > 0.0)) throw ConfigError("/exponential/rms_bound", "must be > 0");
}

std::vector<SymmetricKernel> build_factors(const VerificationConfig& cfg) {
    std::vector<SymmetricKernel> factors;
    for (std::size_t k = 0; k < cfg.degrees.size(); ++k) {
        const KernelSource source = k < cfg.kernels.size() ? cfg.kernels[k] : KernelSource{RandomKernelSource{k + 1, 1.0}};
        factors.push_back(make_kernel(source, cfg.space, cfg.degrees[k], cfg.base_dir, child("/kernels", k)));
    }
    return factors;
}

}  // namespace levychaos
