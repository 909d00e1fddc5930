#include "levychaos/kernel_io.hpp"

#include "json_util.hpp"
#include "levychaos/errors.hpp"

#include <fstream>

namespace levychaos {

using nlohmann::json;
using namespace detail;

namespace {

std::vector<Mark> marks_from_json(const json& v, const std::string& pointer) {
    as_array(v, pointer);
    std::vector<Mark> marks;
    for (std::size_t j = 0; j < v.size(); ++j) {
        const auto p = child(pointer, j);
        marks.push_back({as_number(require(v[j], "size", p), child(p, "size")),
                         as_number(require(v[j], "rate", p), child(p, "rate"))});
    }
    return marks;
}

TimeGrid grid_from_json(const json& doc, const std::string& pointer) {
    if (doc.contains("boundaries")) {
        return TimeGrid(as_number_array(doc["boundaries"], child(pointer, "boundaries")));
    }
    if (doc.contains("horizon") || doc.contains("cells")) {
        const double horizon = as_number(require(doc, "horizon", pointer), child(pointer, "horizon"));
        const auto cells = as_integer(require(doc, "cells", pointer), child(pointer, "cells"));
        if (cells < 1) throw ConfigError(child(pointer, "cells"), "must be >= 1");
        return TimeGrid::uniform(horizon, static_cast<std::size_t>(cells));
    }
    throw ConfigError(child(pointer, "boundaries"), "missing required field (or horizon + cells)");
}

}  // namespace

SpacePtr space_from_json(const json& doc, KernelLimits limits, const std::string& pointer) {
    if (!doc.is_object()) throw ConfigError(pointer.empty() ? "/" : pointer, "expected an object");
    try {
        auto grid = grid_from_json(doc, pointer);
        LevyMeasureSpec measure(marks_from_json(require(doc, "marks", pointer), child(pointer, "marks")));
        return make_space(std::move(grid), std::move(measure), limits);
    } catch (const DomainError& e) {
        throw ConfigError(pointer.empty() ? "/" : pointer, e.what());
    }
}

json space_to_json(const StateSpace& space) {
    json marks = json::array();
    for (const auto& mk : space.measure().marks()) marks.push_back({{"size", mk.size}, {"rate", mk.rate}});
    return {{"boundaries", space.grid().boundaries()}, {"marks", marks}};
}

json kernel_to_json(const SymmetricKernel& kernel) {
    json doc = space_to_json(*kernel.space());
    doc["degree"] = kernel.degree();
    doc["values"] = kernel.values();
    return doc;
}

SymmetricKernel kernel_from_json(const json& doc, SpacePtr expected, KernelLimits limits, const std::string& pointer) {
    const auto degree = as_integer(require(doc, "degree", pointer), child(pointer, "degree"));
    if (degree < 0) throw ConfigError(child(pointer, "degree"), "must be >= 0");
    auto space = space_from_json(doc, expected ? expected->limits() : limits, pointer);
    if (expected) {
        if (!(*space == *expected)) throw ConfigError(pointer.empty() ? "/" : pointer, "kernel state space does not match");
        space = expected;
    }
    auto values = as_number_array(require(doc, "values", pointer), child(pointer, "values"));
    const auto entries = space->entries(static_cast<int>(degree));
    if (values.size() != entries) {
        throw ConfigError(child(pointer, "values"), "expected " + std::to_string(entries) + " values (|points|^degree), got " +
                                                       std::to_string(values.size()));
    }
    try {
        return SymmetricKernel(std::move(space), static_cast<int>(degree), std::move(values));
    } catch (const DomainError& e) {
        throw ConfigError(child(pointer, "values"), e.what());
    }
}

SymmetricKernel load_kernel_file(const std::string& path, SpacePtr expected, KernelLimits limits) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open kernel file");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path, e.what());
    }
    return kernel_from_json(doc, std::move(expected), limits);
}

void save_kernel_file(const SymmetricKernel& kernel, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << kernel_to_json(kernel).dump(2) << '\n';
}

}  // namespace levychaos
