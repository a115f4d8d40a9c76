#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "dadprune/pruning.hpp"

namespace dadprune {

// Manifests are pretty-printed JSON with a fixed key order (see
// docs/formats.md), so two manifests diff line by line. Doubles are printed
// in shortest round-trip form and read back exactly.

std::string format_manifest(const PruneManifest& manifest);

/// Parses and validates: counts, disjointness, and kept ∪ dropped == ranking.
PruneManifest parse_manifest(std::string_view text);

void write_manifest(const std::filesystem::path& path, const PruneManifest& manifest);
PruneManifest read_manifest(const std::filesystem::path& path);

}  // namespace dadprune
