// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>

namespace d2dsim {

/// SHA-256 as a lowercase hex digest. Used by run manifests to pin inputs.
std::string sha256_hex(const void* data, std::size_t len);
std::string sha256_hex(const std::string& s);
std::string sha256_file(const std::filesystem::path& p);

} // namespace d2dsim
