#pragma once

#include "minibqml/sql/ast.hpp"
#include "minibqml/table.hpp"

#include <optional>
#include <span>

namespace minibqml {
class Catalog;
}

namespace minibqml::query {

/// Runs a single-table SELECT. Non-aggregate queries preserve source row
/// order; an aggregate-only projection yields exactly one row.
/// Throws NameError, TypeError, or MixError.
Table execute_select(const sql::SelectStmt &stmt, const Catalog &catalog);
Table execute_select(const sql::SelectStmt &stmt, const Table &source);

/// Evaluates a scalar (aggregate-free) expression on one row.
Value evaluate(const sql::Expr &expr, const Table &table, std::size_t row);

/// Pearson correlation using sample moments. Returns nullopt for fewer than
/// two pairs or a zero variance on either side.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

/// CORR over two numeric columns, skipping rows where either side is NULL.
std::optional<double> corr(const Column &x, const Column &y);

} // namespace minibqml::query
