#pragma once

#include "minibqml/train/model.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace minibqml {

inline constexpr std::string_view kModelFileExtension = ".mbqml.json";

/// JSON document for an artifact. Doubles are written in shortest
/// round-trip form so that loading reproduces every parameter exactly.
std::string model_to_json(const train::ModelArtifact &artifact);
/// Throws FormatError on a malformed document or schema_version mismatch.
train::ModelArtifact model_from_json(std::string_view text);

/// Throws IoError when the file cannot be written.
void save_model(const train::ModelArtifact &artifact, const std::filesystem::path &path);
/// Throws IoError or FormatError.
train::ModelArtifact load_model(const std::filesystem::path &path);

} // namespace minibqml
