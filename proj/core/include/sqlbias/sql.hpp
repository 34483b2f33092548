/*
 * Copyright 2026 The sqlbias Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SQLBIAS_SQL_HPP
#define SQLBIAS_SQL_HPP

#include <optional>
#include <string>
#include <vector>

#include "sqlbias/spider_model.hpp"

namespace sqlbias::sql {

using spider::DatabaseSchema;
using spider::TableSchema;

enum class AggFn { none, count, sum, avg, min, max };
enum class CmpOp { eq, ne, lt, le, gt, ge, in, not_in, like, not_like, between };
enum class SetOp { none, union_all_of, intersect, except };
enum class OrderDir { asc, desc };

/// A possibly schema-resolved column reference. Names are lowercased at
/// parse time; "@" qualifiers are already mapped to ".". table_index and
/// column_index are -1 until resolution succeeds; from_entry indexes the
/// enclosing scope's FROM list and is meaningful only inside that scope.
struct ColumnRef {
  std::string qualifier;
  std::string column;
  int table_index = -1;
  int column_index = -1;
  int from_entry = -1;

  bool resolved() const { return table_index >= 0 && column_index >= 0; }
};

/// A select/order/condition operand: star, a bare column, or an aggregate
/// over one of those.
struct Expr {
  AggFn agg = AggFn::none;
  bool distinct = false;
  bool star = false;
  ColumnRef col;
};

struct SqlAst;

/// One boolean atom or a flattened group. and_group only appears inside an
/// or_group's members; top-level conjunction is the clause's own list.
struct Condition {
  enum class Kind { simple, or_group, and_group };
  enum class Rhs { value, column, subquery };

  Kind kind = Kind::simple;
  Expr left;
  CmpOp op = CmpOp::eq;
  Rhs rhs = Rhs::value;
  ColumnRef right_col;
  int value_arity = 1;              // element count of a literal IN list
  std::vector<SqlAst> sub;          // one element when rhs == subquery
  std::vector<Condition> members;   // or_group / and_group only
};

/// One FROM source: a base table or a parenthesized subquery, with the ON
/// conjuncts of the join that introduced it.
struct FromEntry {
  std::string table;
  std::string alias;
  std::vector<SqlAst> subquery;     // one element for derived tables
  std::vector<Condition> on;
  int table_index = -1;
};

struct OrderItem {
  Expr expr;
  OrderDir dir = OrderDir::asc;
};

struct SqlAst {
  bool select_distinct = false;
  std::vector<Expr> select_items;
  std::vector<FromEntry> from;
  std::vector<Condition> where;
  std::vector<ColumnRef> group_by;
  std::vector<Condition> having;
  std::vector<OrderItem> order_by;
  std::optional<long long> limit;

  SetOp set_op = SetOp::none;
  bool set_all = false;
  std::vector<SqlAst> set_rhs;      // one element when set_op != none

  /// Original literal texts in document order, root statement only; the
  /// placeholder token "value" stands for each of them in the AST proper.
  std::vector<std::string> raw_literals;
};

/// Parses one statement of the supported dialect subset: single or joined
/// SELECT with where/group/having/order/limit, IN and comparison subqueries,
/// derived tables, and union/intersect/except chains. "@" acts as ".".
/// Identifiers are lowercased; literals become the placeholder "value" with
/// their raw text kept on the root's raw_literals. A pair of adjacent bare
/// identifiers is merged with "_" only when the merged name is a column of
/// the schema. Column references that fail to resolve are kept unresolved.
/// Throws Unparseable with a character offset on grammar violations.
SqlAst parse_sql(const std::string& sql_text, const DatabaseSchema& schema);

/// Every column reference in every clause, nested scopes included, in
/// document order (select, from, where, group by, having, order by, then the
/// set-operation arm). Star never appears.
std::vector<ColumnRef> extract_column_refs(const SqlAst& ast);

/// Canonical form: scope-local aliases renamed to t1..tn in FROM order and
/// every resolved reference rewritten to them; where/having/on conjunct
/// lists sorted by their serialized text; symmetric column-to-column
/// comparisons operand-ordered. Idempotent.
SqlAst normalize(const SqlAst& ast);

/// Deterministic lowercase text with explicit "as tN" aliases; parses back
/// to a structurally equal AST under the same schema.
std::string serialize(const SqlAst& ast);

/// serialize(normalize(ast)): the equality key used for exact matching.
std::string canonical_text(const SqlAst& ast);

/// Structural equality through the canonical key.
bool ast_equal(const SqlAst& a, const SqlAst& b);

}  // namespace sqlbias::sql

#endif  // SQLBIAS_SQL_HPP
