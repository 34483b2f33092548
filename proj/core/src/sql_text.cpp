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

#include <algorithm>
#include <functional>

#include "sqlbias/errors.hpp"
#include "sqlbias/sql.hpp"
#include "sqlbias/text.hpp"

namespace sqlbias::sql {

namespace {

std::string ref_text(const ColumnRef& ref) {
  if (ref.qualifier.empty()) return ref.column;
  return ref.qualifier + "." + ref.column;
}

std::string agg_name(AggFn agg) {
  switch (agg) {
    case AggFn::none:
      break;
    case AggFn::count:
      return "count";
    case AggFn::sum:
      return "sum";
    case AggFn::avg:
      return "avg";
    case AggFn::min:
      return "min";
    case AggFn::max:
      return "max";
  }
  throw InvariantViolation("aggregate name requested for none");
}

std::string expr_text(const Expr& expr) {
  std::string inner = expr.star ? "*" : ref_text(expr.col);
  if (expr.agg == AggFn::none) return inner;
  return agg_name(expr.agg) + "(" + (expr.distinct ? "distinct " : "") +
         inner + ")";
}

std::string op_text(CmpOp op) {
  switch (op) {
    case CmpOp::eq:
      return "=";
    case CmpOp::ne:
      return "!=";
    case CmpOp::lt:
      return "<";
    case CmpOp::le:
      return "<=";
    case CmpOp::gt:
      return ">";
    case CmpOp::ge:
      return ">=";
    case CmpOp::in:
      return "in";
    case CmpOp::not_in:
      return "not in";
    case CmpOp::like:
      return "like";
    case CmpOp::not_like:
      return "not like";
    case CmpOp::between:
      return "between";
  }
  throw InvariantViolation("unknown comparison operator");
}

std::string cond_text(const Condition& cond);

std::string simple_cond_text(const Condition& cond) {
  std::string left = expr_text(cond.left);
  switch (cond.op) {
    case CmpOp::between:
      return left + " between value and value";
    case CmpOp::in:
    case CmpOp::not_in: {
      std::string rhs;
      if (cond.rhs == Condition::Rhs::subquery) {
        rhs = serialize(cond.sub.front());
      } else {
        std::vector<std::string> parts(
            static_cast<std::size_t>(std::max(cond.value_arity, 1)), "value");
        rhs = text::join(parts, ", ");
      }
      return left + " " + op_text(cond.op) + " (" + rhs + ")";
    }
    default:
      break;
  }
  std::string rhs;
  switch (cond.rhs) {
    case Condition::Rhs::value:
      rhs = "value";
      break;
    case Condition::Rhs::column:
      rhs = ref_text(cond.right_col);
      break;
    case Condition::Rhs::subquery:
      rhs = "(" + serialize(cond.sub.front()) + ")";
      break;
  }
  return left + " " + op_text(cond.op) + " " + rhs;
}

std::string group_text(const Condition& cond, const char* joiner) {
  std::vector<std::string> parts;
  parts.reserve(cond.members.size());
  for (const auto& member : cond.members) parts.push_back(cond_text(member));
  return "(" + text::join(parts, joiner) + ")";
}

std::string cond_text(const Condition& cond) {
  switch (cond.kind) {
    case Condition::Kind::simple:
      return simple_cond_text(cond);
    case Condition::Kind::or_group:
      return group_text(cond, " or ");
    case Condition::Kind::and_group:
      return group_text(cond, " and ");
  }
  throw InvariantViolation("unknown condition kind");
}

std::string cond_list_text(const std::vector<Condition>& conds) {
  std::vector<std::string> parts;
  parts.reserve(conds.size());
  for (const auto& cond : conds) parts.push_back(cond_text(cond));
  return text::join(parts, " and ");
}

std::string from_entry_source(const FromEntry& entry) {
  if (!entry.subquery.empty()) return "(" + serialize(entry.subquery.front()) + ")";
  return entry.table;
}

void collect_refs(const SqlAst& ast, std::vector<ColumnRef>& out);

void collect_expr(const Expr& expr, std::vector<ColumnRef>& out) {
  if (!expr.star) out.push_back(expr.col);
}

void collect_cond(const Condition& cond, std::vector<ColumnRef>& out) {
  if (cond.kind != Condition::Kind::simple) {
    for (const auto& member : cond.members) collect_cond(member, out);
    return;
  }
  collect_expr(cond.left, out);
  if (cond.rhs == Condition::Rhs::column) out.push_back(cond.right_col);
  if (cond.rhs == Condition::Rhs::subquery)
    collect_refs(cond.sub.front(), out);
}

void collect_refs(const SqlAst& ast, std::vector<ColumnRef>& out) {
  for (const auto& item : ast.select_items) collect_expr(item, out);
  for (const auto& entry : ast.from) {
    if (!entry.subquery.empty()) collect_refs(entry.subquery.front(), out);
    for (const auto& cond : entry.on) collect_cond(cond, out);
  }
  for (const auto& cond : ast.where) collect_cond(cond, out);
  for (const auto& ref : ast.group_by) out.push_back(ref);
  for (const auto& cond : ast.having) collect_cond(cond, out);
  for (const auto& item : ast.order_by) collect_expr(item.expr, out);
  if (!ast.set_rhs.empty()) collect_refs(ast.set_rhs.front(), out);
}

void normalize_scope(SqlAst& ast) {
  for (auto& entry : ast.from)
    if (!entry.subquery.empty()) normalize_scope(entry.subquery.front());

  std::function<void(Condition&)> normalize_cond_subs = [&](Condition& cond) {
    if (cond.kind != Condition::Kind::simple) {
      for (auto& member : cond.members) normalize_cond_subs(member);
      return;
    }
    if (cond.rhs == Condition::Rhs::subquery)
      normalize_scope(cond.sub.front());
  };
  for (auto& entry : ast.from)
    for (auto& cond : entry.on) normalize_cond_subs(cond);
  for (auto& cond : ast.where) normalize_cond_subs(cond);
  for (auto& cond : ast.having) normalize_cond_subs(cond);
  if (!ast.set_rhs.empty()) normalize_scope(ast.set_rhs.front());

  // positional canonical aliases
  for (std::size_t i = 0; i < ast.from.size(); ++i)
    ast.from[i].alias = "t" + std::to_string(i + 1);

  auto rewrite = [&](ColumnRef& ref) {
    if (ref.from_entry >= 0 &&
        ref.from_entry < static_cast<int>(ast.from.size()))
      ref.qualifier = ast.from[static_cast<std::size_t>(ref.from_entry)].alias;
  };
  auto rewrite_expr = [&](Expr& expr) {
    if (!expr.star) rewrite(expr.col);
  };
  std::function<void(Condition&)> rewrite_cond = [&](Condition& cond) {
    if (cond.kind != Condition::Kind::simple) {
      for (auto& member : cond.members) rewrite_cond(member);
      return;
    }
    rewrite_expr(cond.left);
    if (cond.rhs == Condition::Rhs::column) rewrite(cond.right_col);
  };
  for (auto& item : ast.select_items) rewrite_expr(item);
  for (auto& entry : ast.from)
    for (auto& cond : entry.on) rewrite_cond(cond);
  for (auto& cond : ast.where) rewrite_cond(cond);
  for (auto& ref : ast.group_by) rewrite(ref);
  for (auto& cond : ast.having) rewrite_cond(cond);
  for (auto& item : ast.order_by) rewrite_expr(item.expr);

  // orient symmetric column-to-column comparisons
  std::function<void(Condition&)> orient = [&](Condition& cond) {
    if (cond.kind != Condition::Kind::simple) {
      for (auto& member : cond.members) orient(member);
      return;
    }
    if ((cond.op == CmpOp::eq || cond.op == CmpOp::ne) &&
        cond.rhs == Condition::Rhs::column && cond.left.agg == AggFn::none &&
        !cond.left.star) {
      if (ref_text(cond.right_col) < ref_text(cond.left.col))
        std::swap(cond.left.col, cond.right_col);
    }
  };
  for (auto& entry : ast.from)
    for (auto& cond : entry.on) orient(cond);
  for (auto& cond : ast.where) orient(cond);
  for (auto& cond : ast.having) orient(cond);

  // deterministic conjunct and disjunct order
  auto sort_conds = [](std::vector<Condition>& conds) {
    std::stable_sort(conds.begin(), conds.end(),
                     [](const Condition& a, const Condition& b) {
                       return cond_text(a) < cond_text(b);
                     });
  };
  std::function<void(Condition&)> sort_members = [&](Condition& cond) {
    if (cond.kind == Condition::Kind::simple) return;
    for (auto& member : cond.members) sort_members(member);
    std::stable_sort(cond.members.begin(), cond.members.end(),
                     [](const Condition& a, const Condition& b) {
                       return cond_text(a) < cond_text(b);
                     });
  };
  for (auto& entry : ast.from) {
    for (auto& cond : entry.on) sort_members(cond);
    sort_conds(entry.on);
  }
  for (auto& cond : ast.where) sort_members(cond);
  sort_conds(ast.where);
  for (auto& cond : ast.having) sort_members(cond);
  sort_conds(ast.having);
}

}  // namespace

std::vector<ColumnRef> extract_column_refs(const SqlAst& ast) {
  std::vector<ColumnRef> out;
  collect_refs(ast, out);
  return out;
}

std::string serialize(const SqlAst& ast) {
  std::string out = "select ";
  if (ast.select_distinct) out += "distinct ";
  {
    std::vector<std::string> parts;
    parts.reserve(ast.select_items.size());
    for (const auto& item : ast.select_items) parts.push_back(expr_text(item));
    out += text::join(parts, ", ");
  }
  out += " from ";
  for (std::size_t i = 0; i < ast.from.size(); ++i) {
    const FromEntry& entry = ast.from[i];
    if (i > 0) out += " join ";
    out += from_entry_source(entry);
    if (!entry.alias.empty()) out += " as " + entry.alias;
    if (!entry.on.empty()) out += " on " + cond_list_text(entry.on);
  }
  if (!ast.where.empty()) out += " where " + cond_list_text(ast.where);
  if (!ast.group_by.empty()) {
    std::vector<std::string> parts;
    parts.reserve(ast.group_by.size());
    for (const auto& ref : ast.group_by) parts.push_back(ref_text(ref));
    out += " group by " + text::join(parts, ", ");
  }
  if (!ast.having.empty()) out += " having " + cond_list_text(ast.having);
  if (!ast.order_by.empty()) {
    std::vector<std::string> parts;
    parts.reserve(ast.order_by.size());
    for (const auto& item : ast.order_by)
      parts.push_back(expr_text(item.expr) +
                      (item.dir == OrderDir::desc ? " desc" : " asc"));
    out += " order by " + text::join(parts, ", ");
  }
  if (ast.limit) out += " limit " + std::to_string(*ast.limit);
  if (ast.set_op != SetOp::none) {
    switch (ast.set_op) {
      case SetOp::union_all_of:
        out += ast.set_all ? " union all " : " union ";
        break;
      case SetOp::intersect:
        out += " intersect ";
        break;
      case SetOp::except:
        out += " except ";
        break;
      case SetOp::none:
        break;
    }
    out += serialize(ast.set_rhs.front());
  }
  return out;
}

SqlAst normalize(const SqlAst& ast) {
  SqlAst out = ast;
  normalize_scope(out);
  return out;
}

std::string canonical_text(const SqlAst& ast) { return serialize(normalize(ast)); }

bool ast_equal(const SqlAst& a, const SqlAst& b) {
  return canonical_text(a) == canonical_text(b);
}

}  // namespace sqlbias::sql
