#include "levychaos/cli.hpp"

#include "levychaos/config.hpp"
#include "levychaos/errors.hpp"
#include "levychaos/expansion.hpp"
#include "levychaos/kernel_io.hpp"
#include "levychaos/levy.hpp"
#include "levychaos/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

namespace levychaos {

using nlohmann::json;

namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
    std::optional<std::size_t> samples;
    std::optional<int> order;
    std::optional<int> m;
    std::string degrees;
    std::string format = "json";
    std::string output;
};

std::vector<int> parse_degrees(const std::string& text) {
    std::vector<int> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        int v = -1;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || v < 0) throw ConfigError("--degrees", "expected comma-separated nonnegative integers");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("--degrees", "expected at least one degree");
    return out;
}

VerificationConfig resolve_config(const Options& opt) {
    VerificationConfig cfg = opt.config.empty() ? default_config() : load_config(opt.config);
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.paths) cfg.paths = *opt.paths;
    if (opt.samples) cfg.samples = *opt.samples;
    if (opt.order) cfg.truncation_order = *opt.order;
    if (!opt.degrees.empty()) {
        cfg.degrees = parse_degrees(opt.degrees);
        if (cfg.kernels.size() > cfg.degrees.size()) cfg.kernels.resize(cfg.degrees.size());
    }
    if (opt.m && static_cast<std::size_t>(*opt.m) != cfg.degrees.size()) {
        throw ConfigError("--m", "m = " + std::to_string(*opt.m) + " but " + std::to_string(cfg.degrees.size()) +
                                     " degrees were given");
    }
    validate(cfg);
    return cfg;
}

// Provenance keys use the caller's (unreduced) 1-based factor numbering.
json multi_index_json(const Expansion& e, const std::vector<int>& values, int reduced_m) {
    json out = json::object();
    if (reduced_m < 2) return out;
    const auto& subsets = upsilon(reduced_m);
    for (std::size_t p = 0; p < subsets.size(); ++p) {
        if (values[p] == 0) continue;
        std::vector<int> members;
        for (int k : subsets[p].members()) members.push_back(static_cast<int>(e.active_factors[static_cast<std::size_t>(k - 1)]) + 1);
        out[SubsetIndex(members).to_string()] = values[p];
    }
    return out;
}

std::string multi_index_text(const json& j) {
    if (j.empty()) return "-";
    std::string s;
    for (const auto& [key, value] : j.items()) {
        if (!s.empty()) s += ' ';
        s += "(" + key + ")=" + std::to_string(value.get<int>());
    }
    return s;
}

void write_expansion(const Expansion& e, const std::string& format, std::ostream& out) {
    const int reduced_m = static_cast<int>(e.active_factors.size());
    if (format == "json") {
        for (std::size_t t = 0; t < e.terms.size(); ++t) {
            const auto& term = e.terms[t];
            json line{{"term", t},
                      {"l", multi_index_json(e, term.provenance.l(), reduced_m)},
                      {"n", multi_index_json(e, term.provenance.n(), reduced_m)},
                      {"coefficient", term.coefficient.str()},
                      {"degree", term.degree},
                      {"values", term.kernel.values()}};
            out << line.dump() << '\n';
        }
        return;
    }
    out << std::left << std::setw(6) << "term" << std::setw(14) << "coefficient" << std::setw(8) << "degree"
        << std::setw(26) << "l" << std::setw(26) << "n" << "norm^2\n";
    for (std::size_t t = 0; t < e.terms.size(); ++t) {
        const auto& term = e.terms[t];
        out << std::left << std::setw(6) << t << std::setw(14) << term.coefficient.str() << std::setw(8) << term.degree
            << std::setw(26) << multi_index_text(multi_index_json(e, term.provenance.l(), reduced_m)) << std::setw(26)
            << multi_index_text(multi_index_json(e, term.provenance.n(), reduced_m)) << std::setprecision(10)
            << norm_squared(term.kernel) << '\n';
    }
}

void write_report(const VerificationReport& report, const std::string& format, std::ostream& out) {
    if (format == "json") {
        for (const auto& r : report.records) out << r.to_json().dump() << '\n';
        out << report.summary_json().dump() << '\n';
        return;
    }
    out << std::left << std::setw(52) << "check" << std::setw(8) << "result" << std::setw(8) << "metric" << std::setw(16)
        << "error" << "tolerance\n";
    for (const auto& r : report.records) {
        const char* result = r.skipped ? "SKIP" : (r.pass ? "PASS" : "FAIL");
        out << std::left << std::setw(52) << r.check << std::setw(8) << result << std::setw(8) << r.metric;
        if (r.skipped) {
            out << r.note << '\n';
        } else {
            out << std::setw(16) << std::setprecision(6) << r.error << r.tolerance << '\n';
        }
    }
    out << report.suite << ": " << report.passed() << "/" << report.total() << " passed, " << report.failed() << " failed, "
        << report.skipped() << " skipped\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Product formula for multiple integrals of Poisson random measures: expansion and verification"};
    app.require_subcommand(1, 1);
    Options opt;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", opt.config, "JSON config file (schema 1)")->check(CLI::ExistingFile);
        sub->add_option("--seed", opt.seed, "master seed for simulated paths");
        sub->add_option("--format", opt.format, "output format")->check(CLI::IsMember({"json", "table"}));
        sub->add_option("-o,--output", opt.output, "write output to this file instead of stdout");
    };

    auto* expand = app.add_subcommand("expand", "print the product expansion as JSON lines or a table");
    add_common(expand);
    expand->add_option("--m", opt.m, "number of factors (must match --degrees)");
    expand->add_option("--degrees", opt.degrees, "comma-separated factor degrees, e.g. 2,1");

    auto* product = app.add_subcommand("verify-product", "pathwise check of the product identity");
    add_common(product);
    product->add_option("--degrees", opt.degrees, "comma-separated factor degrees");
    product->add_option("--paths", opt.paths, "number of simulated paths");

    auto* pair = app.add_subcommand("verify-pair", "two-factor formula versus the general engine");
    add_common(pair);
    pair->add_option("--degrees", opt.degrees, "two comma-separated degrees");

    auto* isometry = app.add_subcommand("verify-isometry", "Monte Carlo isometry and orthogonality checks");
    add_common(isometry);
    isometry->add_option("--samples", opt.samples, "Monte Carlo sample count");

    auto* exponential = app.add_subcommand("verify-exponential", "exponential functional against its chaos series");
    add_common(exponential);
    exponential->add_option("--samples", opt.samples, "Monte Carlo sample count for the mean check");
    exponential->add_option("--paths", opt.paths, "paths for the truncation RMS");
    exponential->add_option("--order", opt.order, "truncation order R");

    auto* simulate = app.add_subcommand("simulate", "print simulated jump paths as JSON lines");
    add_common(simulate);
    simulate->add_option("--paths", opt.paths, "number of paths");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    std::unique_ptr<std::ofstream> file;
    std::ostream* sink = &out;
    try {
        const auto cfg = resolve_config(opt);
        if (!opt.output.empty()) {
            file = std::make_unique<std::ofstream>(opt.output);
            if (!*file) throw ConfigError("--output", "cannot open " + opt.output);
            sink = file.get();
        }

        if (expand->parsed()) {
            write_expansion(expand_product(build_factors(cfg)), opt.format, *sink);
            return 0;
        }
        if (simulate->parsed()) {
            for (const auto& path : simulate_paths(cfg.space, cfg.seed, cfg.paths)) *sink << path_to_json(path).dump() << '\n';
            return 0;
        }
        VerificationReport report;
        if (product->parsed()) report = verify_product_pathwise(cfg);
        if (pair->parsed()) report = verify_pair_vs_general(cfg);
        if (isometry->parsed()) report = verify_isometry(cfg);
        if (exponential->parsed()) report = verify_exponential(cfg);
        write_report(report, opt.format, *sink);
        return report.ok() ? 0 : 1;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
    } catch (const ResourceError& e) {
        err << "resource guard '" << e.guard() << "' tripped: " << e.what() << '\n';
    } catch (const DomainError& e) {
        err << "config error: " << e.what() << '\n';
    } catch (const NonFiniteError& e) {
        err << "config error: " << e.what() << '\n';
    }
    return 2;
}

}  // namespace levychaos
