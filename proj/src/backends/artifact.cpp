// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#include "goalcoach/backends/artifact.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "goalcoach/backends/trainable.hpp"
#include "goalcoach/core/errors.hpp"
#include "goalcoach/core/text.hpp"

namespace goalcoach {

namespace fs = std::filesystem;

Json ArtifactManifest::to_json() const {
  return {{"format_version", format_version},
          {"kind", backend_kind_name(spec.kind)},
          {"identity", spec.identity},
          {"config", spec.config},
          {"recipe", recipe},
          {"corpus_hash", corpus_hash},
          {"metrics", metrics}};
}

ArtifactManifest ArtifactManifest::from_json(const Json& j) {
  ArtifactManifest m;
  try {
    m.format_version = j.at("format_version").get<int>();
    const auto kind = parse_backend_kind(j.at("kind").get<std::string>());
    if (!kind) throw SchemaError("artifact: unknown kind " + j.at("kind").dump());
    m.spec.kind = *kind;
    m.spec.identity = j.at("identity").get<std::string>();
    m.spec.config = j.value("config", Json::object());
    m.recipe = j.value("recipe", Json::object());
    m.corpus_hash = j.value("corpus_hash", "");
    m.metrics = j.value("metrics", Json::object());
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("artifact manifest: ") + e.what());
  }
  if (m.format_version != kArtifactFormatVersion) {
    throw SchemaError("artifact format version " + std::to_string(m.format_version) + " is not supported");
  }
  return m;
}

void save_artifact(const fs::path& dir, const Backend& backend, const TrainRecipe& recipe,
                   const std::string& corpus_hash, const Json& metrics) {
  const auto* persistent = dynamic_cast<const PersistentBackend*>(&backend);
  if (persistent == nullptr) throw ConfigError("backend " + backend.spec().identity + " has no artifact form");
  fs::create_directories(dir);
  persistent->save_payload(dir);
  ArtifactManifest m;
  m.spec = backend.spec();
  m.recipe = recipe.to_json();
  m.corpus_hash = corpus_hash;
  m.metrics = metrics;
  std::ofstream out(dir / "manifest.json");
  if (!out) throw ConfigError("cannot write manifest in " + dir.string());
  out << m.to_json().dump(2) << '\n';
}

ArtifactManifest read_manifest(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw SchemaError("no manifest.json in " + dir.string());
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw SchemaError("manifest.json: " + std::string(e.what()));
  }
  return ArtifactManifest::from_json(j);
}

std::shared_ptr<Backend> load_artifact(const fs::path& dir) {
  ArtifactManifest m = read_manifest(dir);
  switch (m.spec.kind) {
    case BackendKind::kSlotTagger:
      return LinearSlotTagger::load(dir, m.spec);
    case BackendKind::kCarryover:
      return LinearCarryover::load(dir, m.spec);
    case BackendKind::kSeqMultitask:
      return LinearSeqMultitask::load(dir, m.spec);
    case BackendKind::kEmotionClassifier:
      return LinearEmotionClassifier::load(dir, m.spec);
    case BackendKind::kMechanismLabeler:
      return LinearMechanismLabeler::load(dir, m.spec);
    case BackendKind::kCausalLm:
      return NGramEmpathyGenerator::load(dir, m.spec);
    case BackendKind::kEmpathyRegressor:
      return LinearRegressor::load(dir, m.spec);
    case BackendKind::kLmScorer:
      return NGramScorer::load(dir, m.spec);
    case BackendKind::kParaphraser:
      return TableParaphraser::load(dir, m.spec);
  }
  throw SchemaError("unhandled backend kind");
}

std::string hash_corpus(const fs::path& path) {
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& e : fs::recursive_directory_iterator(path)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
  } else if (fs::is_regular_file(path)) {
    files.push_back(path);
  } else {
    throw ConfigError("corpus path " + path.string() + " does not exist");
  }
  std::sort(files.begin(), files.end());
  std::uint64_t h = fnv1a64("");
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    h = fnv1a64(fs::relative(f, fs::is_directory(path) ? path : path.parent_path()).generic_string(), h);
    h = fnv1a64(data, h);
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace goalcoach
