#pragma once

// JSON import/export for state spaces and kernels.
//
// Kernel document:
//   {"degree": n, "boundaries": [0, t_1, ..., T],
//    "marks": [{"size": z, "rate": r}, ...], "values": [flat row-major]}
// `values` must hold exactly |points|^degree numbers.

#include "levychaos/kernelspace.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace levychaos {

/// {"boundaries": [...], "marks": [...]}; "boundaries" may be replaced by
/// {"horizon": T, "cells": G} for a uniform grid.
SpacePtr space_from_json(const nlohmann::json& doc, KernelLimits limits = {}, const std::string& pointer = "");
nlohmann::json space_to_json(const StateSpace& space);

nlohmann::json kernel_to_json(const SymmetricKernel& kernel);

/// When `expected` is given the document's space must equal it and the kernel
/// is bound to `expected`.
SymmetricKernel kernel_from_json(const nlohmann::json& doc, SpacePtr expected = nullptr,
                                 KernelLimits limits = {}, const std::string& pointer = "");

SymmetricKernel load_kernel_file(const std::string& path, SpacePtr expected = nullptr, KernelLimits limits = {});
void save_kernel_file(const SymmetricKernel& kernel, const std::string& path);

}  // namespace levychaos
