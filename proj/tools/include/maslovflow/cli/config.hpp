#pragma once

// JSON scenario documents.
//
// {
//   "kind": "first_order" | "second_order" | "pair_path",
//   "name": "...",                      optional, defaults to the file stem
//   "m": 1, "T": 1.0,
//   "j": [["1i"]], "b": [["s*cos(t)"]],   first order (optional "jdot")
//   "p": ..., "q": ..., "r": ...,          second order
//   "J": ..., "lambda": ..., "mu": ...,    pair_path, functions of s
//   "boundary": {"w_path": [[...], ...]}  frame (2d x d) in s
//            or {"r_subspace": [[...]]}   constant frame of R in C^{2m}, [] = {0}
//   "numerics": {"steps", "grid", "initial_segments", "max_depth", "lambda_window", "delta_max"},
//   "expected": {"sf": 1, "mas": 1, "provenance": "..."}
// }
//
// A coefficient may instead be {"samples": {"s": [...], "t": [...], "values": [[M, ...], ...]}}
// with values[a][b] the matrix at (s[a], t[b]); entries are numbers or [re, im]
// pairs and the coefficient is interpolated bilinearly.

#include <filesystem>
#include <string>

#include "maslovflow/harness.hpp"

namespace maslovflow::cli {

/// Throws Error(ConfigError) for unreadable files and schema violations, and
/// ParseError for malformed expressions.
harness::Scenario load_config(const std::filesystem::path& path);

harness::Scenario parse_config(const std::string& json_text, const std::string& default_name);

}  // namespace maslovflow::cli
