// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "d2dsim/grid.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace d2dsim::csv {

/// Shortest representation that round-trips exactly (std::to_chars), so
/// emitted files are locale-independent and diffable across runs.
std::string fmt(double v);
std::string fmt(std::int64_t v);

std::vector<std::string> split_line(const std::string& line);

/// Matrix with community-id row/column headers:
///   community_id,0,1,...
///   0,v00,v01,...
void write_matrix(const std::filesystem::path& p, const Mat& m);
Mat read_matrix(const std::filesystem::path& p);

/// Two-column vector file: "community_id,<name>".
void write_vector(const std::filesystem::path& p, const std::vector<double>& v,
                  const std::string& value_name);
std::vector<double> read_vector(const std::filesystem::path& p);

/// Whole-file helpers.
void write_text(const std::filesystem::path& p, const std::string& text);
std::string read_text(const std::filesystem::path& p);

} // namespace d2dsim::csv
