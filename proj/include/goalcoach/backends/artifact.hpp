// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Artifact directory layout:
//   manifest.json   format_version, kind, identity, config, recipe,
//                   corpus_hash, metrics
//   <payload files> written by the backend's save_payload()

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "goalcoach/backends/interfaces.hpp"
#include "goalcoach/backends/recipe.hpp"

namespace goalcoach {

inline constexpr int kArtifactFormatVersion = 1;

struct ArtifactManifest {
  int format_version = kArtifactFormatVersion;
  BackendSpec spec;
  Json recipe = Json::object();
  std::string corpus_hash;
  Json metrics = Json::object();

  Json to_json() const;
  static ArtifactManifest from_json(const Json& j);
};

/// Creates `dir` if needed. Throws ConfigError if the backend cannot be persisted.
void save_artifact(const std::filesystem::path& dir, const Backend& backend, const TrainRecipe& recipe,
                   const std::string& corpus_hash, const Json& metrics = Json::object());

ArtifactManifest read_manifest(const std::filesystem::path& dir);

/// Reconstructs the trained backend recorded in `dir`.
std::shared_ptr<Backend> load_artifact(const std::filesystem::path& dir);

/// Hex FNV-1a over the contents of the given files (sorted by path) or of
/// every regular file below a directory.
std::string hash_corpus(const std::filesystem::path& path);

}  // namespace goalcoach
