#include "minibqml/cli/session.hpp"

#include "minibqml/csv.hpp"
#include "minibqml/error.hpp"
#include "minibqml/eval/report.hpp"
#include "minibqml/model_io.hpp"
#include "minibqml/sql/parser.hpp"
#include "minibqml/sql/token.hpp"

#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>

namespace minibqml::cli {

std::vector<ScriptPiece> split_script(std::string_view text) {
  std::vector<ScriptPiece> out;
  std::size_t i = 0, line = 1, col = 1;
  // A piece starts at its first character outside whitespace and comments.
  std::size_t start = 0, start_line = 1, start_col = 1;
  bool has_content = false;

  auto step = [&] {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  auto close = [&](bool terminated) {
    if (has_content)
      out.push_back({std::string(text.substr(start, i - start)), start_line, start_col,
                     terminated});
    has_content = false;
  };

  while (i < text.size()) {
    const char c = text[i];
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n')
        step();
      continue;
    }
    if (c == ';') {
      close(true);
      step();
      continue;
    }
    if (!has_content && !std::isspace(static_cast<unsigned char>(c))) {
      has_content = true;
      start = i;
      start_line = line;
      start_col = col;
    }
    if (c == '\'' || c == '"' || c == '`') {
      step();
      while (i < text.size()) {
        if (text[i] == c) {
          step();
          if (c != '`' && i < text.size() && text[i] == c) {
            step();
            continue;
          }
          break;
        }
        step();
      }
      continue;
    }
    step();
  }
  close(false);
  return out;
}

EngineConfig engine_config(const SessionConfig &config) {
  EngineConfig e;
  e.default_seed = config.seed;
  e.model_dir = config.model_dir;
  return e;
}

namespace {

std::string locate(const ScriptPiece &piece, std::size_t index, const std::exception &e) {
  std::size_t line = piece.line, col = piece.column;
  if (auto *pe = dynamic_cast<const PositionedError *>(&e)) {
    line = piece.line + pe->line() - 1;
    col = pe->line() == 1 ? piece.column + pe->column() - 1 : pe->column();
  }
  std::ostringstream msg;
  msg << "error: statement " << index << " at line " << line << ", column " << col << ": ";
  if (auto *err = dynamic_cast<const Error *>(&e))
    msg << err->kind() << ": ";
  msg << e.what();
  return msg.str();
}

void emit(const StatementResult &r, OutputFormat format, std::ostream &out,
          std::ostream &err) {
  for (const auto &n : r.notices)
    err << n << '\n';
  for (const auto &w : r.warnings)
    err << "warning: " << w << '\n';
  if (r.table)
    render(*r.table, format, out);
  out.flush();
}

} // namespace

int run_script_text(std::string_view text, Engine &engine, OutputFormat format,
                    std::ostream &out, std::ostream &err) {
  std::vector<ScriptPiece> pieces;
  try {
    pieces = split_script(text);
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  std::size_t index = 0;
  for (const auto &piece : pieces) {
    ++index;
    try {
      emit(engine.execute(piece.text), format, out, err);
    } catch (const std::exception &e) {
      err << locate(piece, index, e) << '\n';
      return 1;
    }
  }
  return 0;
}

int run_script(const std::filesystem::path &path, const SessionConfig &config,
               std::ostream &out, std::ostream &err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << "error: cannot read script '" << path.string() << "'\n";
    return 2;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  Engine engine(engine_config(config));
  return run_script_text(buf.str(), engine, config.output_format, out, err);
}

void export_curves(Engine &engine, std::string_view model, const std::filesystem::path &path) {
  const auto table = eval::curve_table(eval::model_roc_points(engine.model(model)));
  write_csv(table, path);
}

// REPL -------------------------------------------------------------------------

Repl::Repl(const SessionConfig &config, std::ostream &out, std::ostream &err)
    : config_(config), engine_(engine_config(config)), out_(out), err_(err) {}

void Repl::execute_piece(const ScriptPiece &piece) {
  ++statement_count_;
  try {
    emit(engine_.execute(piece.text), config_.output_format, out_, err_);
  } catch (const std::exception &e) {
    err_ << locate(piece, statement_count_, e) << '\n';
  }
}

namespace {

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
      ++i;
    if (i >= s.size())
      break;
    std::string w;
    if (s[i] == '\'' || s[i] == '"') {
      const char q = s[i++];
      while (i < s.size() && s[i] != q)
        w += s[i++];
      ++i;
    } else {
      while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])))
        w += s[i++];
    }
    out.push_back(std::move(w));
  }
  return out;
}

} // namespace

bool Repl::meta_command(std::string_view line) {
  const auto args = words(line);
  const std::string cmd = to_lower(args.at(0));
  try {
    if (cmd == "\\quit" || cmd == "\\q") {
      return false;
    } else if (cmd == "\\load") {
      if (args.size() != 4 || !iequals(args[2], "AS"))
        throw Error("UsageError", "usage: \\load <path> AS <name>");
      const auto &t = engine_.catalog().load_csv(args[1], args[3]);
      err_ << "loaded table " << t.name() << ": " << t.row_count() << " rows, "
           << t.column_count() << " columns\n";
    } else if (cmd == "\\tables") {
      for (const auto &name : engine_.catalog().table_names()) {
        const auto &t = engine_.catalog().table(name);
        out_ << name << " (" << t.row_count() << " rows, " << t.column_count()
             << " columns)\n";
      }
    } else if (cmd == "\\models") {
      for (const auto &name : engine_.catalog().model_names())
        out_ << name << " (" << to_string(engine_.catalog().model(name).model_type())
             << ")\n";
    } else if (cmd == "\\save") {
      if (args.size() != 3)
        throw Error("UsageError", "usage: \\save <model> <path>");
      save_model(engine_.model(args[1]), args[2]);
      err_ << "saved model " << args[1] << " to " << args[2] << '\n';
    } else if (cmd == "\\export") {
      if (args.size() != 4 || !iequals(args[2], "curves"))
        throw Error("UsageError", "usage: \\export <model> curves <path>");
      export_curves(engine_, args[1], args[3]);
      err_ << "wrote curves for " << args[1] << " to " << args[3] << '\n';
    } else {
      err_ << "error: unknown meta-command " << args[0] << '\n';
    }
  } catch (const Error &e) {
    err_ << "error: " << e.kind() << ": " << e.what() << '\n';
  } catch (const std::exception &e) {
    err_ << "error: " << e.what() << '\n';
  }
  return true;
}

bool Repl::feed_line(const std::string &line) {
  if (buffer_.find_first_not_of(" \t\r\n") == std::string::npos) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos && line[first] == '\\') {
      buffer_.clear();
      return meta_command(std::string_view(line).substr(first));
    }
  }
  buffer_ += line;
  buffer_ += '\n';
  auto pieces = split_script(buffer_);
  std::string rest;
  for (auto &piece : pieces) {
    if (piece.terminated)
      execute_piece(piece);
    else
      rest = piece.text;
  }
  buffer_ = rest;
  return true;
}

void Repl::finish() {
  auto pieces = split_script(buffer_);
  buffer_.clear();
  for (const auto &piece : pieces)
    execute_piece(piece);
}

void Repl::run(std::istream &in, bool interactive) {
  std::string line;
  while (true) {
    if (interactive) {
      out_ << (buffer_.empty() ? "minibqml> " : "     ...> ");
      out_.flush();
    }
    if (!std::getline(in, line))
      break;
    if (!feed_line(line))
      return;
  }
  finish();
}

} // namespace minibqml::cli
