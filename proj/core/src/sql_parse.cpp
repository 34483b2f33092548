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

#include <cctype>
#include <functional>
#include <unordered_set>

#include "sqlbias/errors.hpp"
#include "sqlbias/sql.hpp"
#include "sqlbias/text.hpp"

namespace sqlbias::sql {

namespace {

struct Token {
  enum class Kind { ident, number, str, punct, end };
  Kind kind = Kind::end;
  std::string text;
  std::size_t offset = 0;
};

const std::unordered_set<std::string>& keywords() {
  static const std::unordered_set<std::string> words = {
      "select", "distinct", "from",  "as",    "join",  "on",     "where",
      "and",    "or",       "not",   "in",    "like",  "between", "group",
      "by",     "having",   "order", "asc",   "desc",  "limit",  "union",
      "intersect", "except", "all"};
  return words;
}

bool is_word_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (is_word_start(c)) {
      std::string word;
      while (i < n && is_word_char(s[i]))
        word.push_back(static_cast<char>(
            std::tolower(static_cast<unsigned char>(s[i++]))));
      out.push_back({Token::Kind::ident, word, start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (i < n && std::isdigit(static_cast<unsigned char>(s[i])))
        num.push_back(s[i++]);
      if (i + 1 < n && s[i] == '.' &&
          std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
        num.push_back(s[i++]);
        while (i < n && std::isdigit(static_cast<unsigned char>(s[i])))
          num.push_back(s[i++]);
      }
      out.push_back({Token::Kind::number, num, start});
      continue;
    }
    if (c == '\'' || c == '"') {
      char quote = c;
      ++i;
      std::string body;
      bool closed = false;
      while (i < n) {
        if (s[i] == '\\' && i + 1 < n) {
          body.push_back(s[i + 1]);
          i += 2;
          continue;
        }
        if (s[i] == quote) {
          if (i + 1 < n && s[i + 1] == quote) {  // doubled quote escape
            body.push_back(quote);
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        body.push_back(s[i++]);
      }
      if (!closed) throw Unparseable("unterminated string literal", start);
      out.push_back({Token::Kind::str, body, start});
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < n && s[i + 1] == b;
    };
    if (two('!', '=') || two('<', '=') || two('<', '>') || two('>', '=')) {
      out.push_back({Token::Kind::punct, s.substr(i, 2), start});
      i += 2;
      continue;
    }
    static const std::string singles = "()*,.;@<=>+-/%";
    if (singles.find(c) != std::string::npos) {
      out.push_back({Token::Kind::punct, std::string(1, c), start});
      ++i;
      continue;
    }
    throw Unparseable(std::string("unexpected character '") + c + "'", start);
  }
  out.push_back({Token::Kind::end, "", n});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const DatabaseSchema& schema)
      : tokens_(std::move(tokens)), schema_(schema) {
    for (const auto& table : schema.tables)
      for (const auto& col : table.columns)
        schema_columns_.insert(text::to_lower(col.name));
  }

  SqlAst parse() {
    SqlAst ast = parse_statement();
    if (peek().text == ";") advance();
    if (peek().kind != Token::Kind::end)
      fail("trailing input after statement");
    ast.raw_literals = std::move(literals_);
    return ast;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const DatabaseSchema& schema_;
  std::unordered_set<std::string> schema_columns_;
  std::vector<std::string> literals_;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& what) const {
    throw Unparseable(what, peek().offset);
  }

  bool at_keyword(const char* word) const {
    return peek().kind == Token::Kind::ident && peek().text == word;
  }
  bool eat_keyword(const char* word) {
    if (!at_keyword(word)) return false;
    advance();
    return true;
  }
  void expect_keyword(const char* word) {
    if (!eat_keyword(word)) fail(std::string("expected '") + word + "'");
  }
  bool eat_punct(const char* p) {
    if (peek().kind == Token::Kind::punct && peek().text == p) {
      advance();
      return true;
    }
    return false;
  }
  void expect_punct(const char* p) {
    if (!eat_punct(p)) fail(std::string("expected '") + p + "'");
  }

  bool plain_ident() const {
    return peek().kind == Token::Kind::ident &&
           keywords().count(peek().text) == 0;
  }

  SqlAst parse_statement() {
    SqlAst ast = parse_select_core();
    SetOp op = SetOp::none;
    if (eat_keyword("union"))
      op = SetOp::union_all_of;
    else if (eat_keyword("intersect"))
      op = SetOp::intersect;
    else if (eat_keyword("except"))
      op = SetOp::except;
    if (op != SetOp::none) {
      ast.set_op = op;
      ast.set_all = (op == SetOp::union_all_of) && eat_keyword("all");
      ast.set_rhs.push_back(parse_statement());
    }
    return ast;
  }

  SqlAst parse_select_core() {
    SqlAst ast;
    expect_keyword("select");
    ast.select_distinct = eat_keyword("distinct");
    ast.select_items.push_back(parse_expr());
    while (eat_punct(",")) ast.select_items.push_back(parse_expr());
    expect_keyword("from");
    parse_from(ast);
    if (eat_keyword("where")) ast.where = parse_clause_conditions();
    if (eat_keyword("group")) {
      expect_keyword("by");
      ast.group_by.push_back(parse_column_ref());
      while (eat_punct(",")) ast.group_by.push_back(parse_column_ref());
    }
    if (eat_keyword("having")) ast.having = parse_clause_conditions();
    if (eat_keyword("order")) {
      expect_keyword("by");
      ast.order_by.push_back(parse_order_item());
      while (eat_punct(",")) ast.order_by.push_back(parse_order_item());
    }
    if (eat_keyword("limit")) {
      if (peek().kind != Token::Kind::number) fail("expected limit count");
      ast.limit = std::stoll(advance().text);
    }
    resolve_scope(ast);
    return ast;
  }

  void parse_from(SqlAst& ast) {
    ast.from.push_back(parse_table_source());
    for (;;) {
      if (eat_keyword("join")) {
        FromEntry entry = parse_table_source();
        if (eat_keyword("on")) {
          entry.on.push_back(parse_condition());
          while (eat_keyword("and")) entry.on.push_back(parse_condition());
        }
        ast.from.push_back(std::move(entry));
        continue;
      }
      if (peek().kind == Token::Kind::punct && peek().text == "," &&
          peek(1).kind == Token::Kind::ident &&
          keywords().count(peek(1).text) == 0) {
        // comma-separated FROM; join conditions live in WHERE
        advance();
        ast.from.push_back(parse_table_source());
        continue;
      }
      break;
    }
  }

  FromEntry parse_table_source() {
    FromEntry entry;
    if (eat_punct("(")) {
      entry.subquery.push_back(parse_statement());
      expect_punct(")");
    } else {
      if (!plain_ident()) fail("expected table name");
      entry.table = advance().text;
      entry.table_index = schema_.table_index(entry.table);
    }
    if (eat_keyword("as")) {
      if (!plain_ident()) fail("expected alias after 'as'");
      entry.alias = advance().text;
    } else if (plain_ident()) {
      entry.alias = advance().text;
    }
    return entry;
  }

  Expr parse_expr() {
    Expr expr;
    if (peek().kind == Token::Kind::ident && peek(1).text == "(" &&
        peek(1).kind == Token::Kind::punct) {
      const std::string& name = peek().text;
      AggFn agg = AggFn::none;
      if (name == "count")
        agg = AggFn::count;
      else if (name == "sum")
        agg = AggFn::sum;
      else if (name == "avg")
        agg = AggFn::avg;
      else if (name == "min")
        agg = AggFn::min;
      else if (name == "max")
        agg = AggFn::max;
      if (agg != AggFn::none) {
        advance();
        advance();  // '('
        expr.agg = agg;
        expr.distinct = eat_keyword("distinct");
        if (eat_punct("*"))
          expr.star = true;
        else
          expr.col = parse_column_ref();
        expect_punct(")");
        return expr;
      }
    }
    if (eat_punct("*")) {
      expr.star = true;
      return expr;
    }
    expr.col = parse_column_ref();
    return expr;
  }

  /// Adjacent bare identifiers merge with "_" only when the merged text
  /// names a column somewhere in the schema.
  std::string read_column_name() {
    if (!plain_ident()) fail("expected column name");
    std::string name = advance().text;
    while (plain_ident()) {
      std::string merged = name + "_" + peek().text;
      if (schema_columns_.count(merged) == 0) break;
      advance();
      name = std::move(merged);
    }
    return name;
  }

  ColumnRef parse_column_ref() {
    ColumnRef ref;
    if (!plain_ident()) fail("expected column reference");
    std::string first = advance().text;
    if (eat_punct(".") || eat_punct("@")) {
      ref.qualifier = std::move(first);
      ref.column = read_column_name();
    } else {
      // Re-run the merge rule from the already-consumed first word.
      ref.column = std::move(first);
      while (plain_ident()) {
        std::string merged = ref.column + "_" + peek().text;
        if (schema_columns_.count(merged) == 0) break;
        advance();
        ref.column = std::move(merged);
      }
    }
    return ref;
  }

  OrderItem parse_order_item() {
    OrderItem item;
    item.expr = parse_expr();
    if (eat_keyword("desc"))
      item.dir = OrderDir::desc;
    else if (eat_keyword("asc"))
      item.dir = OrderDir::asc;
    return item;
  }

  std::vector<Condition> parse_clause_conditions() {
    Condition c = parse_or_expr();
    if (c.kind == Condition::Kind::and_group) return std::move(c.members);
    return {std::move(c)};
  }

  Condition parse_or_expr() {
    std::vector<Condition> members;
    members.push_back(parse_and_expr());
    while (eat_keyword("or")) members.push_back(parse_and_expr());
    if (members.size() == 1) return std::move(members.front());
    Condition group;
    group.kind = Condition::Kind::or_group;
    for (auto& m : members) {
      if (m.kind == Condition::Kind::or_group)
        for (auto& inner : m.members) group.members.push_back(std::move(inner));
      else
        group.members.push_back(std::move(m));
    }
    return group;
  }

  Condition parse_and_expr() {
    std::vector<Condition> members;
    members.push_back(parse_atom());
    while (eat_keyword("and")) members.push_back(parse_atom());
    if (members.size() == 1) return std::move(members.front());
    Condition group;
    group.kind = Condition::Kind::and_group;
    for (auto& m : members) {
      if (m.kind == Condition::Kind::and_group)
        for (auto& inner : m.members) group.members.push_back(std::move(inner));
      else
        group.members.push_back(std::move(m));
    }
    return group;
  }

  Condition parse_atom() {
    if (peek().text == "(" && peek().kind == Token::Kind::punct &&
        !(peek(1).kind == Token::Kind::ident && peek(1).text == "select")) {
      advance();
      Condition c = parse_or_expr();
      expect_punct(")");
      return c;
    }
    return parse_condition();
  }

  Condition parse_condition() {
    Condition cond;
    cond.left = parse_expr();
    if (eat_keyword("between")) {
      cond.op = CmpOp::between;
      cond.rhs = Condition::Rhs::value;
      parse_value_literal();
      expect_keyword("and");
      parse_value_literal();
      return cond;
    }
    bool negated = eat_keyword("not");
    if (eat_keyword("in")) {
      cond.op = negated ? CmpOp::not_in : CmpOp::in;
      expect_punct("(");
      if (at_keyword("select")) {
        cond.rhs = Condition::Rhs::subquery;
        cond.sub.push_back(parse_statement());
      } else {
        cond.rhs = Condition::Rhs::value;
        parse_value_literal();
        cond.value_arity = 1;
        while (eat_punct(",")) {
          parse_value_literal();
          ++cond.value_arity;
        }
      }
      expect_punct(")");
      return cond;
    }
    if (eat_keyword("like")) {
      cond.op = negated ? CmpOp::not_like : CmpOp::like;
      parse_value_literal();
      cond.rhs = Condition::Rhs::value;
      return cond;
    }
    if (negated) fail("expected 'in' or 'like' after 'not'");

    const Token& op_token = peek();
    if (op_token.kind != Token::Kind::punct) fail("expected comparison operator");
    const std::string& op = op_token.text;
    if (op == "=")
      cond.op = CmpOp::eq;
    else if (op == "!=" || op == "<>")
      cond.op = CmpOp::ne;
    else if (op == "<")
      cond.op = CmpOp::lt;
    else if (op == "<=")
      cond.op = CmpOp::le;
    else if (op == ">")
      cond.op = CmpOp::gt;
    else if (op == ">=")
      cond.op = CmpOp::ge;
    else
      fail("expected comparison operator");
    advance();

    if (eat_punct("(")) {
      expect_keyword("select");
      // rewind so parse_statement sees the keyword
      --pos_;
      cond.rhs = Condition::Rhs::subquery;
      cond.sub.push_back(parse_statement());
      expect_punct(")");
      return cond;
    }
    const Token& rhs = peek();
    if (rhs.kind == Token::Kind::str || rhs.kind == Token::Kind::number ||
        (rhs.kind == Token::Kind::punct && rhs.text == "-") ||
        (rhs.kind == Token::Kind::ident && rhs.text == "value")) {
      cond.rhs = Condition::Rhs::value;
      parse_value_literal();
      return cond;
    }
    cond.rhs = Condition::Rhs::column;
    cond.right_col = parse_column_ref();
    return cond;
  }

  /// Consumes one literal and records its raw text. The bare token "value"
  /// is the canonical placeholder and stands for itself.
  void parse_value_literal() {
    const Token& t = peek();
    if (t.kind == Token::Kind::str || t.kind == Token::Kind::number) {
      literals_.push_back(advance().text);
      return;
    }
    if (t.kind == Token::Kind::punct && t.text == "-" &&
        peek(1).kind == Token::Kind::number) {
      advance();
      literals_.push_back("-" + advance().text);
      return;
    }
    if (t.kind == Token::Kind::ident && t.text == "value") {
      literals_.push_back(advance().text);
      return;
    }
    fail("expected literal value");
  }

  // Scope binding. Qualifiers bind to aliases first, then table names;
  // unqualified names take the first FROM table that has the column.
  void resolve_scope(SqlAst& ast) {
    auto bind = [&](ColumnRef& ref) {
      if (!ref.qualifier.empty()) {
        // alias bindings take precedence over raw table names
        for (std::size_t i = 0; i < ast.from.size(); ++i) {
          if (ast.from[i].alias == ref.qualifier) {
            ref.from_entry = static_cast<int>(i);
            bind_column(ref, ast.from[i]);
            return;
          }
        }
        for (std::size_t i = 0; i < ast.from.size(); ++i) {
          if (ast.from[i].table == ref.qualifier) {
            ref.from_entry = static_cast<int>(i);
            bind_column(ref, ast.from[i]);
            return;
          }
        }
        return;  // unknown qualifier stays unresolved
      }
      for (std::size_t i = 0; i < ast.from.size(); ++i) {
        const FromEntry& entry = ast.from[i];
        if (entry.table_index < 0) continue;
        const TableSchema& table =
            schema_.tables[static_cast<size_t>(entry.table_index)];
        int ci = table.column_index(ref.column);
        if (ci >= 0) {
          ref.from_entry = static_cast<int>(i);
          ref.table_index = entry.table_index;
          ref.column_index = ci;
          return;
        }
      }
    };
    auto bind_expr = [&](Expr& expr) {
      if (!expr.star) bind(expr.col);
    };
    std::function<void(Condition&)> bind_cond = [&](Condition& cond) {
      if (cond.kind != Condition::Kind::simple) {
        for (auto& m : cond.members) bind_cond(m);
        return;
      }
      bind_expr(cond.left);
      if (cond.rhs == Condition::Rhs::column) bind(cond.right_col);
      // subquery interiors were bound by their own parse
    };
    for (auto& item : ast.select_items) bind_expr(item);
    for (auto& entry : ast.from)
      for (auto& c : entry.on) bind_cond(c);
    for (auto& c : ast.where) bind_cond(c);
    for (auto& g : ast.group_by) bind(g);
    for (auto& c : ast.having) bind_cond(c);
    for (auto& o : ast.order_by) bind_expr(o.expr);
  }

  void bind_column(ColumnRef& ref, const FromEntry& entry) {
    if (entry.table_index < 0) return;  // derived table or unknown base
    const TableSchema& table =
        schema_.tables[static_cast<size_t>(entry.table_index)];
    int ci = table.column_index(ref.column);
    if (ci < 0) return;
    ref.table_index = entry.table_index;
    ref.column_index = ci;
  }
};

}  // namespace

SqlAst parse_sql(const std::string& sql_text, const DatabaseSchema& schema) {
  if (sql_text.find_first_not_of(" \t\r\n") == std::string::npos)
    throw Unparseable("empty statement", 0);
  Parser parser(lex(sql_text), schema);
  return parser.parse();
}

}  // namespace sqlbias::sql
