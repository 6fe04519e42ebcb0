#include "minibqml/catalog.hpp"

#include "minibqml/csv.hpp"
#include "minibqml/error.hpp"

namespace minibqml {

const Table &Catalog::add_table(std::string name, Table table, bool replace) {
  const auto key = to_lower(name);
  if (!replace && tables_.count(key))
    throw CatalogError("table '" + name + "' already exists");
  table.set_name(std::move(name));
  auto ptr = std::make_shared<const Table>(std::move(table));
  tables_[key] = ptr;
  return *ptr;
}

const Table &Catalog::load_csv(const std::filesystem::path &path, std::string name,
                               bool replace) {
  if (!replace && has_table(name))
    throw CatalogError("table '" + name + "' already exists");
  Table t = read_csv(path, name);
  return add_table(std::move(name), std::move(t), replace);
}

bool Catalog::has_table(std::string_view name) const {
  return tables_.count(to_lower(name)) != 0;
}

const Table &Catalog::table(std::string_view name) const {
  auto it = tables_.find(to_lower(name));
  if (it == tables_.end())
    throw NameError("unknown table '" + std::string(name) + "'");
  return *it->second;
}

std::vector<std::string> Catalog::table_names() const {
  std::vector<std::string> out;
  for (const auto &[key, t] : tables_)
    out.push_back(t->name());
  return out;
}

const train::ModelArtifact &Catalog::add_model(train::ModelArtifact model, bool replace) {
  const auto key = to_lower(model.name);
  if (!replace && models_.count(key))
    throw CatalogError("model '" + model.name + "' already exists");
  auto ptr = std::make_shared<const train::ModelArtifact>(std::move(model));
  models_[key] = ptr;
  return *ptr;
}

bool Catalog::has_model(std::string_view name) const {
  return models_.count(to_lower(name)) != 0;
}

const train::ModelArtifact &Catalog::model(std::string_view name) const {
  auto it = models_.find(to_lower(name));
  if (it == models_.end())
    throw NameError("unknown model '" + std::string(name) + "'");
  return *it->second;
}

std::vector<std::string> Catalog::model_names() const {
  std::vector<std::string> out;
  for (const auto &[key, m] : models_)
    out.push_back(m->name);
  return out;
}

} // namespace minibqml
