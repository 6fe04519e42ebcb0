#pragma once

#include "minibqml/cli/render.hpp"
#include "minibqml/engine.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace minibqml::cli {

struct SessionConfig {
  std::uint64_t seed = 42;
  OutputFormat output_format = OutputFormat::Table;
  std::optional<std::filesystem::path> model_dir;
};

/// One `;`-separated piece of a script. `line`/`column` locate the first
/// character of `text` in the whole script.
struct ScriptPiece {
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
  bool terminated = false; ///< ended by a `;`
};

/// Splits on `;` outside string literals, quoted identifiers, and `--`
/// comments. Pieces holding only whitespace and comments are dropped.
std::vector<ScriptPiece> split_script(std::string_view text);

/// Executes statements in order, printing results to `out` and notices,
/// warnings, and diagnostics to `err`. Stops at the first failing statement.
/// Returns 0 on success, 1 on a statement error.
int run_script_text(std::string_view text, Engine &engine, OutputFormat format,
                    std::ostream &out, std::ostream &err);

/// Reads and runs a script file; returns 2 when the file cannot be read.
int run_script(const std::filesystem::path &path, const SessionConfig &config,
               std::ostream &out, std::ostream &err);

EngineConfig engine_config(const SessionConfig &config);

/// Writes the ML.ROC_CURVE sweep of `model` as CSV with the header
/// threshold,recall,false_positive_rate,precision.
void export_curves(Engine &engine, std::string_view model, const std::filesystem::path &path);

/// Interactive loop state. Input is fed line by line; complete statements
/// execute as soon as their terminating `;` arrives.
class Repl {
public:
  Repl(const SessionConfig &config, std::ostream &out, std::ostream &err);

  /// Returns false once `\quit` has been entered.
  bool feed_line(const std::string &line);
  /// Executes any unterminated statement left in the buffer.
  void finish();
  void run(std::istream &in, bool interactive);

  Engine &engine() { return engine_; }

private:
  bool meta_command(std::string_view line);
  void execute_piece(const ScriptPiece &piece);

  SessionConfig config_;
  Engine engine_;
  std::ostream &out_;
  std::ostream &err_;
  std::string buffer_;
  std::size_t statement_count_ = 0;
};

} // namespace minibqml::cli
