#include "minibqml/model_io.hpp"

#include "minibqml/error.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace minibqml {

using json = nlohmann::ordered_json;
using namespace train;

namespace {

// JSON has no non-finite numbers; they are stored as strings.
json number(double v) {
  if (std::isfinite(v))
    return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

double number(const json &j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan")
      return std::nan("");
    if (s == "inf")
      return HUGE_VAL;
    if (s == "-inf")
      return -HUGE_VAL;
    throw FormatError("expected a number, got \"" + s + "\"");
  }
  if (!j.is_number())
    throw FormatError("expected a number");
  return j.get<double>();
}

json numbers(const std::vector<double> &v) {
  json a = json::array();
  for (double x : v)
    a.push_back(number(x));
  return a;
}

std::vector<double> numbers(const json &j) {
  std::vector<double> out;
  for (const auto &x : j)
    out.push_back(number(x));
  return out;
}

json matrix(const kernels::Matrix &m) {
  return {{"rows", m.rows}, {"cols", m.cols}, {"data", numbers(m.data)}};
}

kernels::Matrix matrix(const json &j) {
  kernels::Matrix m;
  m.rows = j.at("rows").get<std::size_t>();
  m.cols = j.at("cols").get<std::size_t>();
  m.data = numbers(j.at("data"));
  if (m.data.size() != m.rows * m.cols)
    throw FormatError("matrix data length does not match its shape");
  return m;
}

// Options --------------------------------------------------------------------

json options_json(const TrainOptions &o) {
  return {
      {"model_type", std::string(to_string(o.model_type))},
      {"input_label_cols", json::array({o.label_col})},
      {"data_split_method", o.split_method == SplitMethod::Random ? "RANDOM" : "NO_SPLIT"},
      {"data_split_eval_fraction", o.eval_fraction},
      {"max_iterations", o.max_iterations},
      {"learn_rate", o.learn_rate},
      {"min_rel_progress", number(o.min_rel_progress)},
      {"l1_reg", o.l1_reg},
      {"l2_reg", o.l2_reg},
      {"max_tree_depth", o.max_tree_depth},
      {"hidden_units", o.hidden_units},
      {"batch_size", o.batch_size},
      {"seed", o.seed},
  };
}

TrainOptions options_from(const json &j) {
  TrainOptions o;
  auto type = parse_model_type(j.at("model_type").get<std::string>());
  if (!type)
    throw FormatError("unknown model_type");
  o.model_type = *type;
  o.label_col = j.at("input_label_cols").at(0).get<std::string>();
  o.split_method = j.at("data_split_method").get<std::string>() == "NO_SPLIT"
                       ? SplitMethod::NoSplit
                       : SplitMethod::Random;
  o.eval_fraction = j.at("data_split_eval_fraction").get<double>();
  o.max_iterations = j.at("max_iterations").get<int>();
  o.learn_rate = j.at("learn_rate").get<double>();
  o.min_rel_progress = number(j.at("min_rel_progress"));
  o.l1_reg = j.at("l1_reg").get<double>();
  o.l2_reg = j.at("l2_reg").get<double>();
  o.max_tree_depth = j.at("max_tree_depth").get<int>();
  o.hidden_units = j.at("hidden_units").get<std::vector<int>>();
  o.batch_size = j.at("batch_size").get<int>();
  o.seed = j.at("seed").get<std::uint64_t>();
  return o;
}

// Preprocessor ---------------------------------------------------------------

json preprocessor_json(const prep::PreprocessorState &s) {
  json features = json::array();
  for (const auto &f : s.features) {
    json jf = {{"name", f.name},
               {"source_type", std::string(to_string(f.source_type))},
               {"offset", f.offset},
               {"width", f.width}};
    if (f.kind == prep::FeatureKind::Numeric) {
      jf["kind"] = "numeric";
      jf["mean"] = number(f.mean);
      jf["stddev"] = number(f.stddev);
      jf["impute_value"] = number(f.impute_value);
    } else {
      jf["kind"] = "categorical";
      jf["vocabulary"] = f.vocabulary;
    }
    features.push_back(std::move(jf));
  }
  return {{"label_col", s.label_col}, {"standardize", s.standardize}, {"features", features}};
}

prep::PreprocessorState preprocessor_from(const json &j) {
  prep::PreprocessorState s;
  s.label_col = j.at("label_col").get<std::string>();
  s.standardize = j.at("standardize").get<bool>();
  for (const auto &jf : j.at("features")) {
    prep::FeatureSpec f;
    f.name = jf.at("name").get<std::string>();
    auto type = parse_column_type(jf.at("source_type").get<std::string>());
    if (!type)
      throw FormatError("unknown column type");
    f.source_type = *type;
    f.offset = jf.at("offset").get<std::size_t>();
    f.width = jf.at("width").get<std::size_t>();
    if (jf.at("kind").get<std::string>() == "numeric") {
      f.kind = prep::FeatureKind::Numeric;
      f.mean = number(jf.at("mean"));
      f.stddev = number(jf.at("stddev"));
      f.impute_value = number(jf.at("impute_value"));
    } else {
      f.kind = prep::FeatureKind::Categorical;
      f.vocabulary = jf.at("vocabulary").get<std::vector<std::string>>();
    }
    s.features.push_back(std::move(f));
  }
  return s;
}

// Parameters -----------------------------------------------------------------

json stats_json(const kernels::GradStats &s) {
  return {{"grad", number(s.grad)}, {"hess", number(s.hess)}, {"count", s.count}};
}

kernels::GradStats stats_from(const json &j) {
  return {number(j.at("grad")), number(j.at("hess")), j.at("count").get<std::size_t>()};
}

json node_json(const Tree &t, std::size_t i) {
  const auto &n = t.nodes[i];
  json j = stats_json(n.stats);
  if (n.is_leaf()) {
    j["weight"] = number(n.weight);
    return j;
  }
  j["feature"] = n.feature;
  j["threshold"] = number(n.threshold);
  j["gain"] = number(n.gain);
  j["left"] = node_json(t, static_cast<std::size_t>(n.left));
  j["right"] = node_json(t, static_cast<std::size_t>(n.right));
  return j;
}

// Children are allocated as a consecutive pair before either subtree grows,
// matching the trainer's layout.
void node_from(const json &j, Tree &t, std::size_t i) {
  t.nodes[i].stats = stats_from(j);
  if (!j.contains("feature")) {
    t.nodes[i].weight = number(j.at("weight"));
    return;
  }
  const auto left = t.nodes.size();
  t.nodes.emplace_back();
  t.nodes.emplace_back();
  auto &n = t.nodes[i];
  n.feature = j.at("feature").get<int>();
  n.threshold = number(j.at("threshold"));
  n.gain = number(j.at("gain"));
  n.left = static_cast<int>(left);
  n.right = static_cast<int>(left + 1);
  node_from(j.at("left"), t, left);
  node_from(j.at("right"), t, left + 1);
}

json params_json(const ModelParams &params) {
  return std::visit(
      [](const auto &p) -> json {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, LinearParams>) {
          return {{"weights", numbers(p.weights)}, {"intercept", number(p.intercept)}};
        } else if constexpr (std::is_same_v<P, TreeEnsembleParams>) {
          json trees = json::array();
          for (const auto &t : p.trees)
            trees.push_back(node_json(t, 0));
          return {{"base_score", number(p.base_score)},
                  {"shrinkage", number(p.shrinkage)},
                  {"trees", trees}};
        } else {
          json layers = json::array();
          for (std::size_t l = 0; l < p.weights.size(); ++l)
            layers.push_back({{"weights", matrix(p.weights[l])}, {"bias", numbers(p.biases[l])}});
          return {{"layers", layers}};
        }
      },
      params);
}

ModelParams params_from(const json &j, ModelType type) {
  switch (type) {
  case ModelType::LogisticReg: {
    LinearParams p;
    p.weights = numbers(j.at("weights"));
    p.intercept = number(j.at("intercept"));
    return p;
  }
  case ModelType::BoostedTreeClassifier: {
    TreeEnsembleParams p;
    p.base_score = number(j.at("base_score"));
    p.shrinkage = number(j.at("shrinkage"));
    for (const auto &jt : j.at("trees")) {
      Tree t;
      t.nodes.emplace_back();
      node_from(jt, t, 0);
      p.trees.push_back(std::move(t));
    }
    return p;
  }
  case ModelType::DnnClassifier: {
    DnnParams p;
    for (const auto &jl : j.at("layers")) {
      p.weights.push_back(matrix(jl.at("weights")));
      p.biases.push_back(numbers(jl.at("bias")));
    }
    return p;
  }
  }
  throw FormatError("unknown model type");
}

// Tables ---------------------------------------------------------------------

json table_json(const Table &t) {
  json cols = json::array();
  for (const auto &c : t.columns()) {
    json values = json::array();
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c.is_null(i))
        values.push_back(nullptr);
      else if (c.type() == ColumnType::Int64)
        values.push_back(c.int_at(i));
      else if (c.type() == ColumnType::Float64)
        values.push_back(number(c.float_at(i)));
      else
        values.push_back(c.string_at(i));
    }
    cols.push_back({{"name", c.name()},
                    {"type", std::string(to_string(c.type()))},
                    {"values", std::move(values)}});
  }
  return {{"name", t.name()}, {"row_count", t.row_count()}, {"columns", cols}};
}

Table table_from(const json &j) {
  Table t(j.at("name").get<std::string>());
  const auto rows = j.at("row_count").get<std::size_t>();
  for (const auto &jc : j.at("columns")) {
    auto type = parse_column_type(jc.at("type").get<std::string>());
    if (!type)
      throw FormatError("unknown column type");
    Column c(jc.at("name").get<std::string>(), *type);
    const auto &values = jc.at("values");
    c.reserve(values.size());
    for (const auto &v : values) {
      if (v.is_null())
        c.append_null();
      else if (*type == ColumnType::Int64)
        c.append(Value(v.get<std::int64_t>()));
      else if (*type == ColumnType::Float64)
        c.append(Value(number(v)));
      else
        c.append(Value(v.get<std::string>()));
    }
    if (c.size() != rows)
      throw FormatError("column '" + c.name() + "' length does not match row_count");
    t.add_column(std::move(c));
  }
  t.set_row_count(rows);
  return t;
}

} // namespace

std::string model_to_json(const ModelArtifact &a) {
  json log = json::array();
  for (const auto &e : a.training_log)
    log.push_back({{"iteration", e.iteration}, {"loss", number(e.loss)}});
  json schema = json::array();
  for (const auto &c : a.input_schema)
    schema.push_back({{"name", c.name}, {"type", std::string(to_string(c.type))}});
  json doc = {
      {"schema_version", a.schema_version},
      {"name", a.name},
      {"model_type", std::string(to_string(a.model_type()))},
      {"options", options_json(a.options)},
      {"seed_used", a.seed_used},
      {"input_schema", schema},
      {"preprocessor", preprocessor_json(a.preprocessor)},
      {"params", params_json(a.params)},
      {"training_log", log},
      {"eval_rows", table_json(a.eval_rows)},
  };
  return doc.dump(1) + "\n";
}

ModelArtifact model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception &e) {
    throw FormatError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("schema_version"))
      throw FormatError("model file has no schema_version");
    const int version = doc.at("schema_version").get<int>();
    if (version != kSchemaVersion)
      throw FormatError("unsupported model schema_version " + std::to_string(version) +
                        " (expected " + std::to_string(kSchemaVersion) + ")");
    ModelArtifact a;
    a.schema_version = version;
    a.name = doc.at("name").get<std::string>();
    a.options = options_from(doc.at("options"));
    if (doc.at("model_type").get<std::string>() != to_string(a.options.model_type))
      throw FormatError("model_type does not match the recorded options");
    a.seed_used = doc.at("seed_used").get<std::uint64_t>();
    for (const auto &c : doc.at("input_schema")) {
      auto type = parse_column_type(c.at("type").get<std::string>());
      if (!type)
        throw FormatError("unknown column type");
      a.input_schema.push_back({c.at("name").get<std::string>(), *type});
    }
    a.preprocessor = preprocessor_from(doc.at("preprocessor"));
    a.params = params_from(doc.at("params"), a.options.model_type);
    for (const auto &e : doc.at("training_log"))
      a.training_log.push_back({e.at("iteration").get<int>(), number(e.at("loss"))});
    a.eval_rows = table_from(doc.at("eval_rows"));
    return a;
  } catch (const json::exception &e) {
    throw FormatError(std::string("corrupted model file: ") + e.what());
  } catch (const Error &e) {
    if (dynamic_cast<const FormatError *>(&e))
      throw;
    throw FormatError(std::string("corrupted model file: ") + e.what());
  }
}

void save_model(const ModelArtifact &artifact, const std::filesystem::path &path) {
  const auto text = model_to_json(artifact);
  std::error_code ec;
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot write model file '" + path.string() + "'");
  out << text;
  out.flush();
  if (!out)
    throw IoError("failed writing model file '" + path.string() + "'");
}

ModelArtifact load_model(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot read model file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

} // namespace minibqml
