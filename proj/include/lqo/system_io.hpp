#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "lqo/model.hpp"

namespace lqo {

/// Plain-text system manifest, one `key value...` per line, '#' comments:
///
///   n 50
///   m 1
///   p 1
///   A A.mtx
///   B B.mtx
///   C C.mtx
///   M 1 M1.mtx        (1-based output index; omitted outputs get M = 0)
///   method bt         (optional, reduced models only)
///
/// Matrix paths are relative to the manifest's directory.
LqoSystem load_system(const std::filesystem::path& manifest, bool check_stability = false);

/// Writes <dir>/A.mtx, B.mtx, C.mtx, M<q>.mtx and <dir>/system.txt; returns
/// the manifest path.
std::filesystem::path save_system(const std::filesystem::path& dir, const LqoSystem& sys,
                                  const std::optional<std::string>& method = std::nullopt);

}  // namespace lqo
