#pragma once

#include <optional>
#include <string_view>

namespace minibqml {

enum class ModelType { LogisticReg, BoostedTreeClassifier, DnnClassifier };

std::string_view to_string(ModelType type);
std::optional<ModelType> parse_model_type(std::string_view name);

} // namespace minibqml
