#include "levychaos/verify.hpp"

#include "levychaos/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

namespace levychaos {

using nlohmann::json;

namespace {

CheckRecord judged(std::string check, std::string metric, double lhs, double rhs, double error, double tolerance) {
    CheckRecord r;
    r.check = std::move(check);
    r.metric = std::move(metric);
    r.lhs = lhs;
    r.rhs = rhs;
    r.abs_err = std::abs(lhs - rhs);
    r.error = error;
    r.tolerance = tolerance;
    r.pass = std::abs(error) <= tolerance;
    return r;
}

CheckRecord skipped_record(std::string check, const ResourceError& e) {
    CheckRecord r;
    r.check = std::move(check);
    r.metric = "skipped";
    r.skipped = true;
    r.note = e.guard() + ": " + e.what();
    return r;
}

json number(double v) {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? json("nan") : json(v > 0 ? "inf" : "-inf");
}

}  // namespace

json CheckRecord::to_json() const {
    json j{{"check", check}, {"metric", metric}, {"pass", pass}, {"skipped", skipped}};
    if (!skipped) {
        j["lhs"] = number(lhs);
        j["rhs"] = number(rhs);
        j["abs_err"] = number(abs_err);
        j[metric] = number(error);
        j["tolerance"] = number(tolerance);
    }
    if (!note.empty()) j["note"] = note;
    return j;
}

std::size_t VerificationReport::total() const { return records.size() - skipped(); }

std::size_t VerificationReport::passed() const {
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(),
                                                  [](const CheckRecord& r) { return !r.skipped && r.pass; }));
}

std::size_t VerificationReport::failed() const {
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(),
                                                  [](const CheckRecord& r) { return !r.skipped && !r.pass; }));
}

std::size_t VerificationReport::skipped() const {
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const CheckRecord& r) { return r.skipped; }));
}

json VerificationReport::summary_json() const {
    return {{"summary", {{"suite", suite}, {"total", total()}, {"passed", passed()}, {"failed", failed()}, {"skipped", skipped()}}}};
}

void VerificationReport::append(const VerificationReport& other) {
    records.insert(records.end(), other.records.begin(), other.records.end());
}

// --- parallel plumbing -------------------------------------------------------------

unsigned worker_count() {
    if (const char* env = std::getenv("LEVYCHAOS_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<unsigned>(v);
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const auto workers = static_cast<std::size_t>(std::min<std::size_t>(worker_count(), std::max<std::size_t>(count, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            // strided assignment: index i belongs to worker i % workers
            for (std::size_t i = w; i < count; i += workers) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<JumpPath> simulate_paths(const SpacePtr& space, std::uint64_t seed, std::size_t count) {
    std::vector<std::optional<JumpPath>> slots(count);
    parallel_for(count, [&](std::size_t i) { slots[i] = simulate_path(space, derive_stream_seed(seed, i)); });
    std::vector<JumpPath> paths;
    paths.reserve(count);
    for (auto& s : slots) paths.push_back(std::move(*s));
    return paths;
}

std::uint64_t rerun_seed(std::uint64_t seed) { return derive_stream_seed(seed, 0x5EED'0000'0000'0001ULL); }

// --- product identity ----------------------------------------------------------------

VerificationReport check_product_identity(std::span<const SymmetricKernel> factors, const Expansion& expansion,
                                          std::span<const JumpPath> paths, double rel_tol, double max_tuple_work) {
    std::vector<MultipleIntegral> factor_evals;
    for (const auto& f : factors) factor_evals.emplace_back(f, max_tuple_work);
    std::vector<MultipleIntegral> term_evals;
    std::vector<double> coefficients;
    for (const auto& t : expansion.terms) {
        term_evals.emplace_back(t.kernel, max_tuple_work);
        coefficients.push_back(t.coefficient.convert_to<double>());
    }

    VerificationReport report;
    report.suite = "product_pathwise";
    std::vector<std::optional<CheckRecord>> slots(paths.size());
    parallel_for(paths.size(), [&](std::size_t i) {
        const auto& path = paths[i];
        std::ostringstream name;
        name << "product path " << i << " (atoms=" << path.size() << ")";
        try {
            double lhs = 1.0;
            for (const auto& eval : factor_evals) lhs *= eval(path);
            double rhs = 0.0;
            double magnitude = 0.0;
            for (std::size_t t = 0; t < term_evals.size(); ++t) {
                const double contribution = coefficients[t] * term_evals[t](path);
                rhs += contribution;
                magnitude += std::abs(contribution);
            }
            const double rel = std::abs(lhs - rhs) / std::max(1.0, magnitude);
            slots[i] = judged(name.str(), "rel_err", lhs, rhs, rel, rel_tol);
        } catch (const ResourceError& e) {
            slots[i] = skipped_record(name.str(), e);
        }
    });
    for (auto& s : slots) report.records.push_back(std::move(*s));
    return report;
}

VerificationReport verify_product_pathwise(const VerificationConfig& cfg) {
    validate(cfg);
    const auto factors = build_factors(cfg);
    const auto expansion = expand_product(factors);
    const auto paths = simulate_paths(cfg.space, cfg.seed, cfg.paths);
    return check_product_identity(factors, expansion, paths, cfg.tolerances.rel_tol);
}

// --- engine cross-check ----------------------------------------------------------------

VerificationReport compare_pair_with_general(const SymmetricKernel& f, const SymmetricKernel& g, double kernel_tol) {
    VerificationReport report;
    report.suite = "pair_vs_general";
    const auto pair = expand_pair(f, g);
    const std::vector<SymmetricKernel> factors{f, g};
    const auto general = expand_product(factors);

    std::map<std::pair<int, int>, const ExpansionTerm*> by_index;
    for (const auto& t : general.terms) by_index[pair_indices(t.provenance)] = &t;

    report.records.push_back(judged("term count (" + std::to_string(f.degree()) + "," + std::to_string(g.degree()) + ")",
                                    "abs_err", static_cast<double>(pair.terms.size()),
                                    static_cast<double>(general.terms.size()),
                                    static_cast<double>(pair.terms.size()) - static_cast<double>(general.terms.size()), 0.0));
    for (const auto& t : pair.terms) {
        const auto [k, l] = pair_indices(t.provenance);
        std::ostringstream name;
        name << "pair term (" << f.degree() << "," << g.degree() << ") k=" << k << " l=" << l;
        auto it = by_index.find({k, l});
        if (it == by_index.end()) {
            auto r = judged(name.str(), "abs_err", 0.0, 0.0, std::numeric_limits<double>::infinity(), kernel_tol);
            r.note = "no matching term in the general expansion";
            report.records.push_back(r);
            continue;
        }
        const auto& other = *it->second;
        const bool same_coefficient = t.coefficient == other.coefficient;
        const bool same_degree = t.degree == other.degree && t.kernel.degree() == other.kernel.degree();
        const double diff = same_degree ? max_abs_difference(t.kernel, other.kernel) : std::numeric_limits<double>::infinity();
        auto r = judged(name.str(), "abs_err", t.coefficient.convert_to<double>(), other.coefficient.convert_to<double>(), diff,
                        kernel_tol);
        r.abs_err = diff;
        if (!same_coefficient) {
            r.pass = false;
            r.note = "coefficients differ: " + t.coefficient.str() + " vs " + other.coefficient.str();
        }
        report.records.push_back(r);
    }
    return report;
}

VerificationReport verify_pair_vs_general(const VerificationConfig& cfg) {
    validate(cfg);
    if (cfg.degrees.size() != 2) throw ConfigError("/degrees", "verify-pair needs exactly two factor degrees");
    const auto factors = build_factors(cfg);
    return compare_pair_with_general(factors[0], factors[1]);
}

// --- statistics ----------------------------------------------------------------------

double z_score(std::span<const double> samples, double target) {
    const auto n = static_cast<double>(samples.size());
    if (samples.size() < 2) throw DomainError("z_score needs at least two samples");
    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    const double se = std::sqrt(ss / (n - 1.0) / n);
    const double diff = mean - target;
    if (se == 0.0) return diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    return diff / se;
}

namespace {

double sample_mean(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

struct StatisticalCheck {
    std::string name;
    double target;
    // builds the per-sample statistic from the per-degree integral values
    std::function<std::vector<double>(const std::map<int, std::vector<double>>&)> statistic;
};

// Evaluates every check on one batch; a failed check is repeated once on a
// batch drawn from `rerun_seed` and fails only if both batches fail.
VerificationReport run_statistical_checks(const std::string& suite, const std::vector<StatisticalCheck>& checks,
                                          const std::function<std::map<int, std::vector<double>>(std::uint64_t)>& draw,
                                          std::uint64_t seed, double sigma) {
    VerificationReport report;
    report.suite = suite;
    const auto first = draw(seed);
    std::optional<std::map<int, std::vector<double>>> second;
    for (const auto& c : checks) {
        auto values = c.statistic(first);
        double z = z_score(values, c.target);
        auto record = judged(c.name, "z", sample_mean(values), c.target, z, sigma);
        if (!record.pass) {
            if (!second) second = draw(rerun_seed(seed));
            values = c.statistic(*second);
            z = z_score(values, c.target);
            auto retry = judged(c.name, "z", sample_mean(values), c.target, z, sigma);
            std::ostringstream note;
            note << "re-run with derived seed; first z = " << record.error;
            retry.note = note.str();
            record = retry;
        }
        report.records.push_back(record);
    }
    return report;
}

}  // namespace

VerificationReport verify_isometry(const VerificationConfig& cfg) {
    validate(cfg);
    const auto& iso = cfg.isometry;
    std::set<int> degrees(iso.mean_degrees.begin(), iso.mean_degrees.end());
    degrees.insert(iso.moment_degrees.begin(), iso.moment_degrees.end());
    for (auto [n, m] : iso.cross_degrees) {
        degrees.insert(n);
        degrees.insert(m);
    }
    std::map<int, SymmetricKernel> kernels;
    std::map<int, MultipleIntegral> evaluators;
    for (int n : degrees) {
        kernels.emplace(n, random_kernel(cfg.space, n, iso.kernel_seed + static_cast<std::uint64_t>(n), iso.kernel_scale));
        evaluators.emplace(n, MultipleIntegral(kernels.at(n)));
    }

    std::vector<StatisticalCheck> checks;
    for (int n : iso.mean_degrees) {
        checks.push_back({"E[I_" + std::to_string(n) + "(f)] = 0", 0.0,
                          [n](const auto& v) { return v.at(n); }});
    }
    for (int n : iso.moment_degrees) {
        const double target = factorial(n).convert_to<double>() * norm_squared(kernels.at(n));
        checks.push_back({"E[I_" + std::to_string(n) + "(f)^2] = " + std::to_string(n) + "! |f|^2", target,
                          [n](const auto& v) {
                              auto out = v.at(n);
                              for (auto& x : out) x *= x;
                              return out;
                          }});
    }
    for (auto [n, m] : iso.cross_degrees) {
        const double target = n == m ? factorial(n).convert_to<double>() * norm_squared(kernels.at(n)) : 0.0;
        checks.push_back({"E[I_" + std::to_string(n) + "(f) I_" + std::to_string(m) + "(g)] = " + (n == m ? "n! |f|^2" : "0"),
                          target, [n, m](const auto& v) {
                              const auto& a = v.at(n);
                              const auto& b = v.at(m);
                              std::vector<double> out(a.size());
                              for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
                              return out;
                          }});
    }

    const auto draw = [&](std::uint64_t seed) {
        std::map<int, std::vector<double>> values;
        for (int n : degrees) values[n].assign(cfg.samples, 0.0);
        parallel_for(cfg.samples, [&](std::size_t i) {
            const auto path = simulate_path(cfg.space, derive_stream_seed(seed, i));
            for (int n : degrees) values.at(n)[i] = evaluators.at(n)(path);
        });
        return values;
    };
    try {
        return run_statistical_checks("isometry", checks, draw, cfg.seed, cfg.tolerances.stat_sigma);
    } catch (const ResourceError& e) {
        VerificationReport report;
        report.suite = "isometry";
        for (const auto& c : checks) report.records.push_back(skipped_record(c.name, e));
        return report;
    }
}

VerificationReport verify_exponential(const VerificationConfig& cfg) {
    validate(cfg);
    SymmetricKernel rho = make_kernel(cfg.exponential.rho, cfg.space, 1, cfg.base_dir, "/exponential/rho");
    std::optional<ExponentialSpec> spec;
    try {
        spec.emplace(rho);
    } catch (const NonFiniteError& e) {
        throw ConfigError("/exponential/rho", e.what());
    }

    const int order = cfg.truncation_order;
    const int half = order / 2;
    const TruncatedChaos chaos(*spec, order);

    VerificationReport report;
    report.suite = "exponential";

    // martingale mean E[E(rho)] = 1
    std::vector<StatisticalCheck> checks{{"E[exponential functional] = 1", 1.0, [](const auto& v) { return v.at(0); }}};
    const auto draw = [&](std::uint64_t seed) {
        std::map<int, std::vector<double>> values;
        values[0].assign(cfg.samples, 0.0);
        parallel_for(cfg.samples, [&](std::size_t i) {
            const auto path = simulate_path(cfg.space, derive_stream_seed(seed, i));
            values.at(0)[i] = eval_exponential_functional(*spec, path);
        });
        return values;
    };
    try {
        report.append(run_statistical_checks("exponential", checks, draw, cfg.seed, cfg.tolerances.stat_sigma));
    } catch (const NonFiniteError& e) {
        throw ConfigError("/exponential/rho", e.what());
    }

    // truncation error of the chaos series against the closed form
    const auto paths = simulate_paths(cfg.space, cfg.seed, cfg.paths);
    std::vector<double> sq_full(paths.size(), 0.0), sq_half(paths.size(), 0.0);
    std::string check = "chaos truncation RMS at order " + std::to_string(order) + " < order " + std::to_string(half);
    try {
        parallel_for(paths.size(), [&](std::size_t i) {
            const double exact = eval_exponential_functional(*spec, paths[i]);
            const auto sums = chaos.partial_sums(paths[i]);
            sq_full[i] = (sums[static_cast<std::size_t>(order)] - exact) * (sums[static_cast<std::size_t>(order)] - exact);
            sq_half[i] = (sums[static_cast<std::size_t>(half)] - exact) * (sums[static_cast<std::size_t>(half)] - exact);
        });
    } catch (const NonFiniteError& e) {
        throw ConfigError("/exponential/rho", e.what());
    } catch (const ResourceError& e) {
        report.records.push_back(skipped_record(check, e));
        return report;
    }
    const double rms_full = std::sqrt(sample_mean(sq_full));
    const double rms_half = std::sqrt(sample_mean(sq_half));
    auto record = judged(check, "rms", rms_full, rms_half, rms_full, cfg.exponential.rms_bound);
    const bool decreasing = rms_full < rms_half || (rms_full == 0.0 && rms_half == 0.0);
    record.pass = decreasing && rms_full <= cfg.exponential.rms_bound;
    if (!decreasing) record.note = "truncation error did not decrease";
    report.records.push_back(record);
    return report;
}

}  // namespace levychaos
