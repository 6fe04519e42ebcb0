#pragma once

#include "minibqml/table.hpp"
#include "minibqml/train/model.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace minibqml {

/// In-memory registry of tables and trained models, keyed case-insensitively.
class Catalog {
public:
  /// Registers `table` under `name`; throws CatalogError if the name is taken
  /// and `replace` is false.
  const Table &add_table(std::string name, Table table, bool replace = false);
  /// Reads a CSV file into a new table. Throws IoError, CsvError, CatalogError.
  const Table &load_csv(const std::filesystem::path &path, std::string name,
                        bool replace = false);
  bool has_table(std::string_view name) const;
  /// Throws NameError when absent.
  const Table &table(std::string_view name) const;
  std::vector<std::string> table_names() const;

  const train::ModelArtifact &add_model(train::ModelArtifact model, bool replace = false);
  bool has_model(std::string_view name) const;
  /// Throws NameError when absent.
  const train::ModelArtifact &model(std::string_view name) const;
  std::vector<std::string> model_names() const;

private:
  std::map<std::string, std::shared_ptr<const Table>> tables_;
  std::map<std::string, std::shared_ptr<const train::ModelArtifact>> models_;
};

} // namespace minibqml
