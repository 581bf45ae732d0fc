// Copyright 2026 The semloc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "semloc/pyast.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <sstream>

#include "semloc/error.hpp"
#include "semloc/text.hpp"

namespace semloc {
namespace {

// ---------------------------------------------------------------------------
// Tokens

enum class Tok { kName, kNumber, kString, kOp, kNewline, kIndent, kDedent, kEnd };

struct Token {
  Tok kind;
  std::string text;
  int line = 0;
  int col = 0;  // 1-based
  int end_line = 0;
};

const std::set<std::string, std::less<>>& Keywords() {
  static const std::set<std::string, std::less<>> kKeywords = {
      "False", "None",   "True",    "and",      "as",       "assert",
      "async", "await",  "break",   "class",    "continue", "def",
      "del",   "elif",   "else",    "except",   "finally",  "for",
      "from",  "global", "if",      "import",   "in",       "is",
      "lambda", "nonlocal", "not",  "or",       "pass",     "raise",
      "return", "try",   "while",   "with",     "yield"};
  return kKeywords;
}

bool IsIdentStart(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalpha(u) || c == '_' || u >= 0x80;
}

bool IsIdentChar(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || u >= 0x80;
}

class Lexer {
 public:
  Lexer(std::string_view src, int first_line) : src_(src), line_(first_line) {}

  std::vector<Token> Run() {
    while (true) {
      if (at_line_start_ && brackets_.empty()) {
        if (!Indentation()) break;
      }
      if (i_ >= src_.size()) break;
      char c = src_[i_];
      if (c == ' ' || c == '\t' || c == '\f' || c == '\r') {
        ++i_;
        continue;
      }
      if (c == '#') {
        while (i_ < src_.size() && src_[i_] != '\n') ++i_;
        continue;
      }
      if (c == '\n') {
        if (brackets_.empty()) {
          Emit(Tok::kNewline, "", line_, Col(), line_);
          at_line_start_ = true;
        }
        NewLine();
        continue;
      }
      if (c == '\\') {
        std::size_t j = i_ + 1;
        if (j < src_.size() && src_[j] == '\r') ++j;
        if (j < src_.size() && src_[j] == '\n') {
          i_ = j;
          NewLine();
          continue;
        }
        if (j >= src_.size()) {
          throw SyntaxError(line_, Col(), "unexpected EOF after line continuation");
        }
        throw SyntaxError(line_, Col(),
                          "unexpected character after line continuation character");
      }
      if (c == '"' || c == '\'') {
        String(i_);
        continue;
      }
      if (IsIdentStart(c)) {
        std::size_t j = i_;
        while (j < src_.size() && IsIdentChar(src_[j])) ++j;
        std::string word(src_.substr(i_, j - i_));
        if (j < src_.size() && (src_[j] == '"' || src_[j] == '\'') &&
            IsStringPrefix(word)) {
          String(i_);
          continue;
        }
        Emit(Tok::kName, word, line_, Col(), line_);
        i_ = j;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '.' && i_ + 1 < src_.size() &&
           std::isdigit(static_cast<unsigned char>(src_[i_ + 1])))) {
        Number();
        continue;
      }
      Operator();
    }
    if (!brackets_.empty()) {
      const Bracket& b = brackets_.back();
      throw SyntaxError(b.line, b.col,
                        std::string("'") + b.ch + "' was never closed");
    }
    if (!out_.empty() && out_.back().kind != Tok::kNewline &&
        out_.back().kind != Tok::kDedent) {
      Emit(Tok::kNewline, "", line_, Col(), line_);
    }
    while (indents_.size() > 1) {
      indents_.pop_back();
      Emit(Tok::kDedent, "", line_, 1, line_);
    }
    Emit(Tok::kEnd, "", line_, Col(), line_);
    return std::move(out_);
  }

 private:
  struct Bracket {
    char ch;
    int line;
    int col;
  };

  int Col() const { return static_cast<int>(i_ - line_start_) + 1; }

  void NewLine() {
    ++i_;
    ++line_;
    line_start_ = i_;
  }

  void Emit(Tok kind, std::string text, int line, int col, int end_line) {
    out_.push_back({kind, std::move(text), line, col, end_line});
  }

  static bool IsStringPrefix(const std::string& word) {
    if (word.size() > 2) return false;
    std::string lower;
    for (char ch : word) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    static const std::set<std::string> kPrefixes = {"r", "u", "f", "b", "br",
                                                    "rb", "fr", "rf"};
    return kPrefixes.count(lower) > 0;
  }

  // Consumes leading whitespace of a logical line and emits INDENT/DEDENT.
  // Returns false at end of input.
  bool Indentation() {
    while (true) {
      int width = 0;
      std::size_t j = i_;
      while (j < src_.size()) {
        char c = src_[j];
        if (c == ' ') {
          ++width;
        } else if (c == '\t') {
          width = (width / 8 + 1) * 8;
        } else if (c == '\f') {
          width = 0;
        } else {
          break;
        }
        ++j;
      }
      if (j >= src_.size()) {
        i_ = j;
        return false;
      }
      char c = src_[j];
      if (c == '\r' && j + 1 < src_.size() && src_[j + 1] == '\n') {
        c = '\n';
        ++j;
      }
      if (c == '#' || c == '\n') {  // blank or comment-only line
        while (j < src_.size() && src_[j] != '\n') ++j;
        if (j >= src_.size()) {
          i_ = j;
          return false;
        }
        i_ = j;
        NewLine();
        continue;
      }
      i_ = j;
      int col = Col();
      if (width > indents_.back()) {
        indents_.push_back(width);
        Emit(Tok::kIndent, "", line_, col, line_);
      } else {
        while (width < indents_.back()) {
          indents_.pop_back();
          Emit(Tok::kDedent, "", line_, col, line_);
        }
        if (width != indents_.back()) {
          throw SyntaxError(line_, col,
                            "unindent does not match any outer indentation level");
        }
      }
      at_line_start_ = false;
      return true;
    }
  }

  void String(std::size_t start) {
    int line = line_;
    int col = Col();
    std::size_t j = start;
    while (src_[j] != '"' && src_[j] != '\'') ++j;
    char q = src_[j];
    bool triple = j + 2 < src_.size() && src_[j + 1] == q && src_[j + 2] == q;
    j += triple ? 3 : 1;
    while (true) {
      if (j >= src_.size()) {
        throw SyntaxError(line, col, triple
                                         ? "unterminated triple-quoted string literal"
                                         : "unterminated string literal");
      }
      char c = src_[j];
      if (c == '\\') {
        if (j + 1 < src_.size() && src_[j + 1] == '\n') {
          i_ = j + 1;
          NewLine();
          j = i_;
          continue;
        }
        j += 2;
        continue;
      }
      if (c == '\n') {
        if (!triple) throw SyntaxError(line, col, "unterminated string literal");
        i_ = j;
        NewLine();
        j = i_;
        continue;
      }
      if (c == q) {
        if (!triple) {
          ++j;
          break;
        }
        if (j + 2 < src_.size() && src_[j + 1] == q && src_[j + 2] == q) {
          j += 3;
          break;
        }
      }
      ++j;
    }
    Emit(Tok::kString, std::string(src_.substr(start, j - start)), line, col,
         line_);
    i_ = j;
  }

  void Number() {
    int col = Col();
    std::size_t j = i_;
    bool hex = src_.substr(i_, 2) == "0x" || src_.substr(i_, 2) == "0X";
    while (j < src_.size()) {
      char c = src_[j];
      if (IsIdentChar(c) || c == '.') {
        ++j;
        continue;
      }
      if ((c == '+' || c == '-') && !hex && j > i_ &&
          (src_[j - 1] == 'e' || src_[j - 1] == 'E')) {
        ++j;
        continue;
      }
      break;
    }
    Emit(Tok::kNumber, std::string(src_.substr(i_, j - i_)), line_, col, line_);
    i_ = j;
  }

  void Operator() {
    static const std::array<std::string_view, 3> kThree = {"**=", "//=", "..."};
    static const std::array<std::string_view, 4> kThreeShift = {">>=", "<<=",
                                                                "!==", "==="};
    static const std::array<std::string_view, 20> kTwo = {
        "->", ":=", "**", "//", "<<", ">>", "<=", ">=", "==", "!=",
        "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@=", "<>"};
    int col = Col();
    auto emit = [&](std::string_view op) {
      Emit(Tok::kOp, std::string(op), line_, col, line_);
      i_ += op.size();
    };
    for (std::string_view op : kThree) {
      if (src_.substr(i_, 3) == op) return emit(op);
    }
    for (std::string_view op : kThreeShift) {
      if (src_.substr(i_, 3) == op) {
        if (op == ">>=" || op == "<<=") return emit(op);
        throw SyntaxError(line_, col, "invalid syntax");
      }
    }
    for (std::string_view op : kTwo) {
      if (src_.substr(i_, 2) == op) {
        if (op == "<>") throw SyntaxError(line_, col, "invalid syntax");
        return emit(op);
      }
    }
    char c = src_[i_];
    static constexpr std::string_view kSingle = "+-*/%@&|^~<>()[]{},:;.=";
    if (kSingle.find(c) == std::string_view::npos) {
      throw SyntaxError(line_, col, std::string("invalid character '") + c + "'");
    }
    if (c == '(' || c == '[' || c == '{') {
      brackets_.push_back({c, line_, col});
    } else if (c == ')' || c == ']' || c == '}') {
      char open = c == ')' ? '(' : c == ']' ? '[' : '{';
      if (brackets_.empty()) {
        throw SyntaxError(line_, col, std::string("unmatched '") + c + "'");
      }
      if (brackets_.back().ch != open) {
        throw SyntaxError(line_, col,
                          std::string("closing parenthesis '") + c +
                              "' does not match opening parenthesis '" +
                              brackets_.back().ch + "'");
      }
      brackets_.pop_back();
    }
    emit(std::string_view(&src_[i_], 1));
  }

  std::string_view src_;
  std::size_t i_ = 0;
  std::size_t line_start_ = 0;
  int line_;
  bool at_line_start_ = true;
  std::vector<int> indents_{0};
  std::vector<Bracket> brackets_;
  std::vector<Token> out_;
};

// ---------------------------------------------------------------------------
// Expressions

enum class Shape {
  kName,
  kAttribute,
  kSubscript,
  kCall,
  kTuple,
  kList,
  kStarred,
  kLiteral,
  kOther,
};

struct Expr {
  Shape shape = Shape::kOther;
  int line = 0;
  int col = 0;
  std::vector<AstNode> calls;
  std::vector<Expr> elts;  // members of Tuple/List, operand of Starred
};

void Absorb(Expr& into, Expr&& from) {
  for (AstNode& call : from.calls) into.calls.push_back(std::move(call));
}

void Absorb(std::vector<AstNode>& into, Expr&& from) {
  for (AstNode& call : from.calls) into.push_back(std::move(call));
}

NodeKind KindForSyntax(std::string_view syntax) {
  if (syntax == "If") return NodeKind::kIf;
  if (syntax == "While") return NodeKind::kWhile;
  if (syntax == "For" || syntax == "AsyncFor") return NodeKind::kFor;
  if (syntax == "Assign" || syntax == "AugAssign" || syntax == "AnnAssign") {
    return NodeKind::kAssign;
  }
  if (syntax == "ClassDef") return NodeKind::kClassDef;
  if (syntax == "FunctionDef" || syntax == "AsyncFunctionDef") {
    return NodeKind::kFunctionDef;
  }
  if (syntax == "Call") return NodeKind::kCall;
  return NodeKind::kOther;
}

AstNode MakeNode(std::string syntax, int start, int end,
                 std::vector<AstNode> children) {
  AstNode node;
  node.kind = KindForSyntax(syntax);
  node.syntax = std::move(syntax);
  node.span = {start, end};
  node.children = std::move(children);
  return node;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  AstNode ParseModule(int line_count) {
    std::vector<AstNode> body;
    while (!Is(Tok::kEnd)) {
      if (Is(Tok::kIndent)) throw Error("unexpected indent");
      if (Is(Tok::kNewline)) {
        Advance();
        continue;
      }
      for (AstNode& stmt : ParseStatement()) body.push_back(std::move(stmt));
    }
    return MakeNode("Module", 1, std::max(1, line_count), std::move(body));
  }

  // Single expression, used for f-string replacement fields.
  Expr ParseFieldExpression() {
    Expr e = ParseStarExpressions(/*allow_named=*/true);
    if (Is(Tok::kNewline)) Advance();
    if (!Is(Tok::kEnd)) throw Error("invalid syntax in f-string expression");
    return e;
  }

 private:
  // -- token helpers -------------------------------------------------------

  const Token& Cur() const { return toks_[pos_]; }
  const Token& Peek(std::size_t k = 1) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool Is(Tok kind) const { return Cur().kind == kind; }
  bool IsOp(std::string_view op) const {
    return Cur().kind == Tok::kOp && Cur().text == op;
  }
  bool IsKw(std::string_view kw) const {
    return Cur().kind == Tok::kName && Cur().text == kw;
  }
  static bool IsKeywordToken(const Token& t) {
    return t.kind == Tok::kName && Keywords().count(t.text) > 0;
  }

  const Token& Advance() {
    const Token& t = toks_[pos_];
    if (t.kind == Tok::kName || t.kind == Tok::kNumber ||
        t.kind == Tok::kString || t.kind == Tok::kOp) {
      last_end_ = t.end_line;
    }
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  bool AcceptOp(std::string_view op) {
    if (!IsOp(op)) return false;
    Advance();
    return true;
  }
  bool AcceptKw(std::string_view kw) {
    if (!IsKw(kw)) return false;
    Advance();
    return true;
  }

  SyntaxError Error(const std::string& message) const {
    return SyntaxError(Cur().line, Cur().col, message);
  }
  SyntaxError ErrorAt(const Expr& e, const std::string& message) const {
    return SyntaxError(e.line, e.col, message);
  }

  void ExpectOp(std::string_view op) {
    if (!AcceptOp(op)) {
      if (Is(Tok::kNewline) || Is(Tok::kEnd)) {
        throw Error("expected '" + std::string(op) + "'");
      }
      throw Error("invalid syntax");
    }
  }
  void ExpectKw(std::string_view kw) {
    if (!AcceptKw(kw)) throw Error("expected '" + std::string(kw) + "'");
  }
  std::string ExpectName() {
    if (!Is(Tok::kName) || IsKeywordToken(Cur())) throw Error("invalid syntax");
    return Advance().text;
  }
  void ExpectNewline() {
    if (!Is(Tok::kNewline)) throw Error("invalid syntax");
    Advance();
  }

  bool StartsExpression() const {
    const Token& t = Cur();
    switch (t.kind) {
      case Tok::kNumber:
      case Tok::kString:
        return true;
      case Tok::kName:
        if (!IsKeywordToken(t)) return true;
        return t.text == "None" || t.text == "True" || t.text == "False" ||
               t.text == "not" || t.text == "lambda" || t.text == "await";
      case Tok::kOp:
        return t.text == "(" || t.text == "[" || t.text == "{" ||
               t.text == "-" || t.text == "+" || t.text == "~" ||
               t.text == "..." || t.text == "*";
      default:
        return false;
    }
  }

  // -- targets ---------------------------------------------------------------

  void CheckTarget(const Expr& e, bool allow_sequence = true) const {
    switch (e.shape) {
      case Shape::kName:
      case Shape::kAttribute:
      case Shape::kSubscript:
        return;
      case Shape::kTuple:
      case Shape::kList:
        if (!allow_sequence) {
          throw ErrorAt(e, "illegal expression for augmented assignment");
        }
        for (const Expr& elt : e.elts) CheckTarget(elt);
        return;
      case Shape::kStarred:
        if (!allow_sequence) throw ErrorAt(e, "invalid syntax");
        for (const Expr& elt : e.elts) CheckTarget(elt);
        return;
      case Shape::kCall:
        throw ErrorAt(e, "cannot assign to function call");
      case Shape::kLiteral:
        throw ErrorAt(e, "cannot assign to literal");
      case Shape::kOther:
        throw ErrorAt(e, "cannot assign to expression");
    }
  }

  // star_targets: ('*'? bitwise_or) (',' ...)*  -- stops before 'in' / '='.
  Expr ParseTargetList() {
    Expr first = ParseTargetElement();
    if (!IsOp(",")) return first;
    Expr tuple;
    tuple.shape = Shape::kTuple;
    tuple.line = first.line;
    tuple.col = first.col;
    tuple.elts.push_back(std::move(first));
    while (AcceptOp(",")) {
      if (IsKw("in") || IsOp("=") || IsOp(":") || IsOp(")")) break;
      tuple.elts.push_back(ParseTargetElement());
    }
    for (Expr& elt : tuple.elts) {
      for (AstNode& c : elt.calls) tuple.calls.push_back(c);
    }
    return tuple;
  }

  Expr ParseTargetElement() {
    if (IsOp("*")) {
      Expr star;
      star.line = Cur().line;
      star.col = Cur().col;
      Advance();
      star.shape = Shape::kStarred;
      Expr inner = ParseBitOr();
      star.calls = inner.calls;
      star.elts.push_back(std::move(inner));
      return star;
    }
    return ParseBitOr();
  }

  // -- expression grammar ----------------------------------------------------

  Expr ParseStarExpressions(bool allow_named = false) {
    Expr first = ParseStarExpression(allow_named);
    if (!IsOp(",")) return first;
    Expr tuple;
    tuple.shape = Shape::kTuple;
    tuple.line = first.line;
    tuple.col = first.col;
    tuple.elts.push_back(std::move(first));
    while (AcceptOp(",")) {
      if (!StartsExpression()) break;
      tuple.elts.push_back(ParseStarExpression(allow_named));
    }
    for (Expr& elt : tuple.elts) {
      for (AstNode& c : elt.calls) tuple.calls.push_back(c);
    }
    return tuple;
  }

  Expr ParseStarExpression(bool allow_named = false) {
    if (IsOp("*")) {
      Expr star;
      star.line = Cur().line;
      star.col = Cur().col;
      Advance();
      star.shape = Shape::kStarred;
      Expr inner = ParseBitOr();
      star.calls = inner.calls;
      star.elts.push_back(std::move(inner));
      return star;
    }
    return allow_named ? ParseNamedExpression() : ParseExpression();
  }

  Expr ParseNamedExpression() {
    if (Is(Tok::kName) && !IsKeywordToken(Cur()) && Peek().kind == Tok::kOp &&
        Peek().text == ":=") {
      Expr e;
      e.line = Cur().line;
      e.col = Cur().col;
      Advance();
      Advance();
      Absorb(e, ParseExpression());
      return e;
    }
    Expr e = ParseExpression();
    if (IsOp(":=")) throw ErrorAt(e, "cannot use assignment expressions with this target");
    return e;
  }

  Expr ParseExpression() {
    if (IsKw("lambda")) return ParseLambda();
    Expr e = ParseDisjunction();
    if (IsKw("if")) {
      Advance();
      Expr result;
      result.line = e.line;
      result.col = e.col;
      Absorb(result, std::move(e));
      Absorb(result, ParseDisjunction());
      ExpectKw("else");
      Absorb(result, ParseExpression());
      return result;
    }
    return e;
  }

  Expr ParseLambda() {
    Expr e;
    e.line = Cur().line;
    e.col = Cur().col;
    Advance();  // lambda
    std::vector<AstNode> calls = ParseParameters(":", /*annotations=*/false);
    ExpectOp(":");
    e.calls = std::move(calls);
    Absorb(e, ParseExpression());
    return e;
  }

  template <typename Next>
  Expr ParseBinary(Next next, std::initializer_list<std::string_view> ops,
                   bool keyword_ops = false) {
    Expr left = (this->*next)();
    while (true) {
      bool matched = false;
      for (std::string_view op : ops) {
        if (keyword_ops ? IsKw(op) : IsOp(op)) {
          matched = true;
          break;
        }
      }
      if (!matched) return left;
      Advance();
      Expr combined;
      combined.line = left.line;
      combined.col = left.col;
      Absorb(combined, std::move(left));
      Absorb(combined, (this->*next)());
      left = std::move(combined);
    }
  }

  Expr ParseDisjunction() {
    return ParseBinary(&Parser::ParseConjunction, {"or"}, true);
  }
  Expr ParseConjunction() {
    return ParseBinary(&Parser::ParseInversion, {"and"}, true);
  }
  Expr ParseInversion() {
    if (IsKw("not")) {
      Expr e;
      e.line = Cur().line;
      e.col = Cur().col;
      Advance();
      Absorb(e, ParseInversion());
      return e;
    }
    return ParseComparison();
  }

  Expr ParseComparison() {
    Expr left = ParseBitOr();
    while (true) {
      bool op = false;
      if (IsOp("<") || IsOp(">") || IsOp("==") || IsOp(">=") || IsOp("<=") ||
          IsOp("!=") || IsKw("in")) {
        Advance();
        op = true;
      } else if (IsKw("not") && Peek().kind == Tok::kName && Peek().text == "in") {
        Advance();
        Advance();
        op = true;
      } else if (IsKw("is")) {
        Advance();
        AcceptKw("not");
        op = true;
      }
      if (!op) return left;
      Expr combined;
      combined.line = left.line;
      combined.col = left.col;
      Absorb(combined, std::move(left));
      Absorb(combined, ParseBitOr());
      left = std::move(combined);
    }
  }

  Expr ParseBitOr() { return ParseBinary(&Parser::ParseBitXor, {"|"}); }
  Expr ParseBitXor() { return ParseBinary(&Parser::ParseBitAnd, {"^"}); }
  Expr ParseBitAnd() { return ParseBinary(&Parser::ParseShift, {"&"}); }
  Expr ParseShift() { return ParseBinary(&Parser::ParseSum, {"<<", ">>"}); }
  Expr ParseSum() { return ParseBinary(&Parser::ParseTerm, {"+", "-"}); }
  Expr ParseTerm() {
    return ParseBinary(&Parser::ParseFactor, {"*", "/", "//", "%", "@"});
  }

  Expr ParseFactor() {
    if (IsOp("+") || IsOp("-") || IsOp("~")) {
      Expr e;
      e.line = Cur().line;
      e.col = Cur().col;
      Advance();
      Expr operand = ParseFactor();
      e.shape = operand.shape == Shape::kLiteral ? Shape::kLiteral : Shape::kOther;
      Absorb(e, std::move(operand));
      return e;
    }
    return ParsePower();
  }

  Expr ParsePower() {
    Expr base = ParseAwait();
    if (IsOp("**")) {
      Advance();
      Expr e;
      e.line = base.line;
      e.col = base.col;
      Absorb(e, std::move(base));
      Absorb(e, ParseFactor());
      return e;
    }
    return base;
  }

  Expr ParseAwait() {
    if (IsKw("await")) {
      Expr e;
      e.line = Cur().line;
      e.col = Cur().col;
      Advance();
      Absorb(e, ParsePrimary());
      return e;
    }
    return ParsePrimary();
  }

  Expr ParsePrimary() {
    Expr e = ParseAtom();
    while (true) {
      if (IsOp(".")) {
        Advance();
        ExpectName();
        e.shape = Shape::kAttribute;
        e.elts.clear();
      } else if (IsOp("(")) {
        Advance();
        std::vector<AstNode> children = std::move(e.calls);
        for (AstNode& c : ParseArguments()) children.push_back(std::move(c));
        int end = Cur().line;
        ExpectOp(")");
        AstNode call = MakeNode("Call", e.line, end, std::move(children));
        e.calls.clear();
        e.calls.push_back(std::move(call));
        e.shape = Shape::kCall;
        e.elts.clear();
      } else if (IsOp("[")) {
        Advance();
        Absorb(e, ParseSlices());
        ExpectOp("]");
        e.shape = Shape::kSubscript;
        e.elts.clear();
      } else {
        return e;
      }
    }
  }

  std::vector<AstNode> ParseArguments() {
    std::vector<AstNode> calls;
    bool seen_keyword = false;
    bool seen_double_star = false;
    int count = 0;
    while (!IsOp(")")) {
      if (IsOp("*")) {
        Advance();
        if (seen_double_star) throw Error("iterable argument unpacking follows keyword argument unpacking");
        Absorb(calls, ParseExpression());
      } else if (IsOp("**")) {
        Advance();
        seen_double_star = true;
        Absorb(calls, ParseExpression());
      } else if (Is(Tok::kName) && !IsKeywordToken(Cur()) &&
                 Peek().kind == Tok::kOp && Peek().text == "=") {
        Advance();
        Advance();
        seen_keyword = true;
        Absorb(calls, ParseExpression());
      } else {
        if (seen_keyword || seen_double_star) {
          throw Error(seen_double_star
                          ? "positional argument follows keyword argument unpacking"
                          : "positional argument follows keyword argument");
        }
        Expr arg = ParseNamedExpression();
        if (IsKw("for") || IsKw("async")) {
          Absorb(calls, std::move(arg));
          for (AstNode& c : ParseComprehensionClauses()) calls.push_back(std::move(c));
          if (count > 0 || IsOp(",")) {
            if (AcceptOp(",") && IsOp(")")) {
              // f(x for x in y,) is accepted by the reference parser only
              // when the generator is the sole argument.
              if (count > 0) throw Error("Generator expression must be parenthesized");
              break;
            }
            throw Error("Generator expression must be parenthesized");
          }
        } else {
          Absorb(calls, std::move(arg));
        }
      }
      ++count;
      if (!AcceptOp(",")) break;
    }
    return calls;
  }

  Expr ParseSlices() {
    Expr all;
    all.line = Cur().line;
    all.col = Cur().col;
    do {
      if (IsOp("]")) break;
      Absorb(all, ParseSlice());
    } while (AcceptOp(","));
    return all;
  }

  Expr ParseSlice() {
    Expr e;
    e.line = Cur().line;
    e.col = Cur().col;
    if (IsOp("*")) {
      Advance();
      Absorb(e, ParseBitOr());
      return e;
    }
    if (!IsOp(":")) {
      Expr lower = ParseNamedExpression();
      if (!IsOp(":")) return lower;
      Absorb(e, std::move(lower));
    }
    ExpectOp(":");
    if (!IsOp(":") && !IsOp("]") && !IsOp(",")) Absorb(e, ParseExpression());
    if (AcceptOp(":")) {
      if (!IsOp("]") && !IsOp(",")) Absorb(e, ParseExpression());
    }
    return e;
  }

  std::vector<AstNode> ParseComprehensionClauses() {
    std::vector<AstNode> calls;
    while (IsKw("for") || (IsKw("async") && Peek().text == "for")) {
      AcceptKw("async");
      ExpectKw("for");
      Expr target = ParseTargetList();
      CheckTarget(target);
      Absorb(calls, std::move(target));
      ExpectKw("in");
      Absorb(calls, ParseDisjunction());
      while (AcceptKw("if")) Absorb(calls, ParseDisjunction());
    }
    return calls;
  }

  Expr ParseAtom() {
    const Token& t = Cur();
    Expr e;
    e.line = t.line;
    e.col = t.col;
    switch (t.kind) {
      case Tok::kName:
        if (t.text == "None" || t.text == "True" || t.text == "False") {
          Advance();
          e.shape = Shape::kLiteral;
          return e;
        }
        if (IsKeywordToken(t)) throw Error("invalid syntax");
        Advance();
        e.shape = Shape::kName;
        return e;
      case Tok::kNumber:
        Advance();
        e.shape = Shape::kLiteral;
        return e;
      case Tok::kString:
        e.shape = Shape::kLiteral;
        while (Is(Tok::kString)) {
          Token s = Advance();
          FStringFields(s, e);
        }
        return e;
      case Tok::kOp:
        break;
      default:
        throw Error("invalid syntax");
    }
    if (t.text == "...") {
      Advance();
      e.shape = Shape::kLiteral;
      return e;
    }
    if (t.text == "(") return ParseParenthesized();
    if (t.text == "[") return ParseListDisplay();
    if (t.text == "{") return ParseBraceDisplay();
    throw Error("invalid syntax");
  }

  Expr ParseParenthesized() {
    Expr e;
    e.line = Cur().line;
    e.col = Cur().col;
    Advance();  // (
    if (AcceptOp(")")) {
      e.shape = Shape::kTuple;
      return e;
    }
    if (IsKw("yield")) {
      Absorb(e, ParseYield());
      ExpectOp(")");
      return e;
    }
    Expr first = ParseStarExpression(/*allow_named=*/true);
    if (IsKw("for") || IsKw("async")) {
      Absorb(e, std::move(first));
      for (AstNode& c : ParseComprehensionClauses()) e.calls.push_back(std::move(c));
      ExpectOp(")");
      return e;
    }
    if (!IsOp(",")) {
      ExpectOp(")");
      if (first.shape == Shape::kStarred) throw ErrorAt(first, "cannot use starred expression here");
      first.line = e.line;
      first.col = e.col;
      return first;
    }
    e.shape = Shape::kTuple;
    e.elts.push_back(std::move(first));
    while (AcceptOp(",")) {
      if (IsOp(")")) break;
      e.elts.push_back(ParseStarExpression(/*allow_named=*/true));
    }
    ExpectOp(")");
    for (Expr& elt : e.elts) {
      for (AstNode& c : elt.calls) e.calls.push_back(c);
    }
    return e;
  }

  Expr ParseListDisplay() {
    Expr e;
    e.line = Cur().line;
    e.col = Cur().col;
    Advance();  // [
    e.shape = Shape::kList;
    if (AcceptOp("]")) return e;
    Expr first = ParseStarExpression(/*allow_named=*/true);
    if (IsKw("for") || IsKw("async")) {
      e.shape = Shape::kOther;
      Absorb(e, std::move(first));
      for (AstNode& c : ParseComprehensionClauses()) e.calls.push_back(std::move(c));
      ExpectOp("]");
      return e;
    }
    e.elts.push_back(std::move(first));
    while (AcceptOp(",")) {
      if (IsOp("]")) break;
      e.elts.push_back(ParseStarExpression(/*allow_named=*/true));
    }
    ExpectOp("]");
    for (Expr& elt : e.elts) {
      for (AstNode& c : elt.calls) e.calls.push_back(c);
    }
    return e;
  }

  Expr ParseBraceDisplay() {
    Expr e;
    e.line = Cur().line;
    e.col = Cur().col;
    e.shape = Shape::kOther;
    Advance();  // {
    if (AcceptOp("}")) return e;
    bool is_dict = false;
    bool first_item = true;
    while (!IsOp("}")) {
      if (IsOp("**")) {
        if (!first_item && !is_dict) throw Error("invalid syntax");
        is_dict = true;
        Advance();
        Absorb(e, ParseBitOr());
      } else {
        Expr key = ParseStarExpression(/*allow_named=*/true);
        if (first_item && IsOp(":")) is_dict = true;
        Absorb(e, std::move(key));
        if (is_dict) {
          ExpectOp(":");
          Absorb(e, ParseExpression());
        }
        if (first_item && (IsKw("for") || IsKw("async"))) {
          for (AstNode& c : ParseComprehensionClauses()) e.calls.push_back(std::move(c));
          ExpectOp("}");
          return e;
        }
      }
      first_item = false;
      if (!AcceptOp(",")) break;
    }
    ExpectOp("}");
    return e;
  }

  Expr ParseYield() {
    Expr e;
    e.line = Cur().line;
    e.col = Cur().col;
    ExpectKw("yield");
    if (AcceptKw("from")) {
      Absorb(e, ParseExpression());
    } else if (StartsExpression()) {
      Absorb(e, ParseStarExpressions());
    }
    return e;
  }

  // Calls inside f-string replacement fields are real calls; parse them.
  void FStringFields(const Token& tok, Expr& into) {
    std::size_t q = tok.text.find_first_of("'\"");
    std::string prefix = tok.text.substr(0, q);
    bool is_f = prefix.find('f') != std::string::npos ||
                prefix.find('F') != std::string::npos;
    if (!is_f) return;
    char quote = tok.text[q];
    std::size_t qlen = tok.text.compare(q, 3, std::string(3, quote)) == 0 &&
                               tok.text.size() >= q + 6
                           ? 3
                           : 1;
    std::string_view body(tok.text);
    body = body.substr(q + qlen, body.size() - q - 2 * qlen);
    ScanFields(body, tok.line, into);
  }

  void ScanFields(std::string_view body, int first_line, Expr& into) {
    int line = first_line;
    for (std::size_t i = 0; i < body.size(); ++i) {
      char c = body[i];
      if (c == '\n') {
        ++line;
        continue;
      }
      if (c == '}' && i + 1 < body.size() && body[i + 1] == '}') {
        ++i;
        continue;
      }
      if (c != '{') continue;
      if (i + 1 < body.size() && body[i + 1] == '{') {
        ++i;
        continue;
      }
      // Find the end of the expression part and of the whole field.
      int depth = 0;
      std::size_t j = i + 1;
      std::size_t expr_end = std::string_view::npos;
      char in_str = 0;
      for (; j < body.size(); ++j) {
        char d = body[j];
        if (in_str) {
          if (d == in_str) in_str = 0;
          continue;
        }
        if (d == '\'' || d == '"') {
          in_str = d;
        } else if (d == '(' || d == '[' || d == '{') {
          ++depth;
        } else if (d == ')' || d == ']' || d == '}') {
          if (depth == 0) break;
          --depth;
        } else if (depth == 0 && expr_end == std::string_view::npos &&
                   (d == ':' || (d == '!' && j + 1 < body.size() &&
                                 body[j + 1] != '='))) {
          expr_end = j;
        }
      }
      if (j >= body.size()) {
        throw SyntaxError(line, 1, "f-string: expecting '}'");
      }
      if (expr_end == std::string_view::npos) expr_end = j;
      std::string expr(body.substr(i + 1, expr_end - i - 1));
      std::string trimmed = Trim(expr);
      if (!trimmed.empty() && trimmed.back() == '=' &&
          (trimmed.size() < 2 || std::string("=!<>").find(trimmed[trimmed.size() - 2]) == std::string::npos)) {
        trimmed.pop_back();
      }
      if (Trim(trimmed).empty()) {
        throw SyntaxError(line, 1, "f-string: empty expression not allowed");
      }
      std::vector<Token> sub = Lexer("(" + trimmed + ")", line).Run();
      Parser nested(std::move(sub));
      Absorb(into, nested.ParseFieldExpression());
      if (expr_end < j && body[expr_end] == ':') {
        ScanFields(body.substr(expr_end + 1, j - expr_end - 1), line, into);
      }
      for (std::size_t k = i; k < j; ++k) {
        if (body[k] == '\n') ++line;
      }
      i = j;
    }
  }

  // Parameter list up to `terminator` (")" for def, ":" for lambda).
  // Returns the calls found in defaults and annotations.
  std::vector<AstNode> ParseParameters(std::string_view terminator,
                                       bool annotations) {
    std::vector<AstNode> calls;
    bool seen_default = false;
    bool seen_star = false;
    bool seen_double_star = false;
    std::set<std::string> names;
    auto add_name = [&](const std::string& n) {
      if (!names.insert(n).second) {
        throw Error("duplicate argument '" + n + "' in function definition");
      }
    };
    while (!IsOp(terminator)) {
      if (seen_double_star) throw Error("arguments cannot follow var-keyword argument");
      if (IsOp("/")) {
        Advance();
      } else if (IsOp("**")) {
        Advance();
        add_name(ExpectName());
        if (annotations && AcceptOp(":")) Absorb(calls, ParseExpression());
        seen_double_star = true;
      } else if (IsOp("*")) {
        Advance();
        if (seen_star) throw Error("* argument may appear only once");
        seen_star = true;
        seen_default = false;
        if (!IsOp(",") && !IsOp(terminator)) {
          add_name(ExpectName());
          if (annotations && AcceptOp(":")) Absorb(calls, ParseStarExpression());
        }
      } else {
        add_name(ExpectName());
        if (annotations && AcceptOp(":")) Absorb(calls, ParseExpression());
        if (AcceptOp("=")) {
          Absorb(calls, ParseExpression());
          seen_default = true;
        } else if (seen_default && !seen_star) {
          throw Error("non-default argument follows default argument");
        }
      }
      if (!AcceptOp(",")) break;
    }
    return calls;
  }

  // -- statements ------------------------------------------------------------

  std::vector<AstNode> ParseStatement() {
    if (IsOp("@")) return {ParseDecorated()};
    if (IsKw("if")) return {ParseIf()};
    if (IsKw("while")) return {ParseWhile()};
    if (IsKw("for")) return {ParseFor(Cur().line, false)};
    if (IsKw("try")) return {ParseTry()};
    if (IsKw("with")) return {ParseWith(Cur().line, false)};
    if (IsKw("def")) return {ParseFunction(Cur().line, {}, false)};
    if (IsKw("class")) return {ParseClass(Cur().line, {})};
    if (IsKw("async")) {
      int start = Cur().line;
      const Token& next = Peek();
      if (next.kind == Tok::kName && next.text == "def") {
        Advance();
        return {ParseFunction(start, {}, true)};
      }
      if (next.kind == Tok::kName && next.text == "for") {
        Advance();
        return {ParseFor(start, true)};
      }
      if (next.kind == Tok::kName && next.text == "with") {
        Advance();
        return {ParseWith(start, true)};
      }
      throw Error("invalid syntax");
    }
    return ParseSimpleStatements();
  }

  std::vector<AstNode> ParseBlock() {
    ExpectOp(":");
    std::vector<AstNode> body;
    if (Is(Tok::kNewline)) {
      Advance();
      if (!Is(Tok::kIndent)) throw Error("expected an indented block");
      Advance();
      while (!Is(Tok::kDedent) && !Is(Tok::kEnd)) {
        if (Is(Tok::kIndent)) throw Error("unexpected indent");
        for (AstNode& stmt : ParseStatement()) body.push_back(std::move(stmt));
      }
      if (Is(Tok::kDedent)) Advance();
      return body;
    }
    return ParseSimpleStatements();
  }

  std::vector<AstNode> ParseSimpleStatements() {
    std::vector<AstNode> stmts;
    stmts.push_back(ParseSimpleStatement());
    while (AcceptOp(";")) {
      if (Is(Tok::kNewline)) break;
      stmts.push_back(ParseSimpleStatement());
    }
    ExpectNewline();
    return stmts;
  }

  AstNode ParseSimpleStatement() {
    int start = Cur().line;
    std::vector<AstNode> calls;
    auto done = [&](const char* syntax) {
      return MakeNode(syntax, start, last_end_, std::move(calls));
    };
    if (AcceptKw("pass")) return done("Pass");
    if (AcceptKw("break")) return done("Break");
    if (AcceptKw("continue")) return done("Continue");
    if (AcceptKw("return")) {
      if (StartsExpression()) Absorb(calls, ParseStarExpressions());
      return done("Return");
    }
    if (AcceptKw("raise")) {
      if (StartsExpression()) {
        Absorb(calls, ParseExpression());
        if (AcceptKw("from")) Absorb(calls, ParseExpression());
      }
      return done("Raise");
    }
    if (AcceptKw("assert")) {
      Absorb(calls, ParseExpression());
      if (AcceptOp(",")) Absorb(calls, ParseExpression());
      return done("Assert");
    }
    if (IsKw("global") || IsKw("nonlocal")) {
      bool global = IsKw("global");
      Advance();
      do {
        ExpectName();
      } while (AcceptOp(","));
      return done(global ? "Global" : "Nonlocal");
    }
    if (AcceptKw("del")) {
      do {
        if (Is(Tok::kNewline) || IsOp(";")) break;
        Expr target = ParseTargetElement();
        if (target.shape == Shape::kStarred) throw ErrorAt(target, "cannot delete starred");
        CheckTarget(target);
        Absorb(calls, std::move(target));
      } while (AcceptOp(","));
      return done("Delete");
    }
    if (AcceptKw("import")) {
      do {
        ParseDottedName();
        if (AcceptKw("as")) ExpectName();
      } while (AcceptOp(","));
      return done("Import");
    }
    if (AcceptKw("from")) {
      bool has_module = false;
      while (IsOp(".") || IsOp("...")) Advance();
      if (!IsKw("import")) {
        ParseDottedName();
        has_module = true;
      }
      (void)has_module;
      ExpectKw("import");
      if (AcceptOp("*")) return done("ImportFrom");
      bool paren = AcceptOp("(");
      do {
        if (paren && IsOp(")")) break;
        ExpectName();
        if (AcceptKw("as")) ExpectName();
      } while (AcceptOp(","));
      if (paren) ExpectOp(")");
      return done("ImportFrom");
    }

    // Expression statement or assignment.
    Expr first = IsKw("yield") ? ParseYield() : ParseStarExpressions(/*allow_named=*/false);
    if (IsOp("=")) {
      std::vector<Expr> chain;
      chain.push_back(std::move(first));
      while (AcceptOp("=")) {
        chain.push_back(IsKw("yield") ? ParseYield() : ParseStarExpressions());
      }
      for (std::size_t k = 0; k + 1 < chain.size(); ++k) CheckTarget(chain[k]);
      for (Expr& e : chain) Absorb(calls, std::move(e));
      return done("Assign");
    }
    static constexpr std::array<std::string_view, 13> kAugOps = {
        "+=", "-=", "*=", "/=", "//=", "%=", "@=", "&=", "|=", "^=", ">>=", "<<=", "**="};
    for (std::string_view op : kAugOps) {
      if (IsOp(op)) {
        CheckTarget(first, /*allow_sequence=*/false);
        Advance();
        Absorb(calls, std::move(first));
        Absorb(calls, IsKw("yield") ? ParseYield() : ParseStarExpressions());
        return done("AugAssign");
      }
    }
    if (IsOp(":")) {
      if (first.shape != Shape::kName && first.shape != Shape::kAttribute &&
          first.shape != Shape::kSubscript) {
        throw ErrorAt(first, first.shape == Shape::kTuple
                                 ? "only single target (not tuple) can be annotated"
                                 : "illegal target for annotation");
      }
      Advance();
      Absorb(calls, std::move(first));
      Absorb(calls, ParseExpression());
      if (AcceptOp("=")) {
        Absorb(calls, IsKw("yield") ? ParseYield() : ParseStarExpressions());
      }
      return done("AnnAssign");
    }
    if (first.shape == Shape::kStarred) {
      throw ErrorAt(first, "can't use starred expression here");
    }
    Absorb(calls, std::move(first));
    return done("Expr");
  }

  void ParseDottedName() {
    ExpectName();
    while (AcceptOp(".")) ExpectName();
  }

  AstNode ParseIf() {
    int start = Cur().line;
    Advance();  // if / elif
    std::vector<AstNode> children;
    Absorb(children, ParseNamedExpression());
    for (AstNode& s : ParseBlock()) children.push_back(std::move(s));
    if (IsKw("elif")) {
      children.push_back(ParseIf());
    } else if (AcceptKw("else")) {
      for (AstNode& s : ParseBlock()) children.push_back(std::move(s));
    }
    return MakeNode("If", start, last_end_, std::move(children));
  }

  AstNode ParseWhile() {
    int start = Cur().line;
    Advance();
    std::vector<AstNode> children;
    Absorb(children, ParseNamedExpression());
    for (AstNode& s : ParseBlock()) children.push_back(std::move(s));
    if (AcceptKw("else")) {
      for (AstNode& s : ParseBlock()) children.push_back(std::move(s));
    }
    return MakeNode("While", start, last_end_, std::move(children));
  }

  AstNode ParseFor(int start, bool is_async) {
    ExpectKw("for");
    std::vector<AstNode> children;
    Expr target = ParseTargetList();
    CheckTarget(target);
    Absorb(children, std::move(target));
    ExpectKw("in");
    Absorb(children, ParseStarExpressions());
    for (AstNode& s : ParseBlock()) children.push_back(std::move(s));
    if (AcceptKw("else")) {
      for (AstNode& s : ParseBlock()) children.push_back(std::move(s));
    }
    return MakeNode(is_async ? "AsyncFor" : "For", start, last_end_,
                    std::move(children));
  }

  AstNode ParseTry() {
    int start = Cur().line;
    Advance();
    std::vector<AstNode> children = ParseBlock();
    bool handlers = false;
    bool bare_seen = false;
    while (IsKw("except")) {
      if (bare_seen) throw Error("default 'except:' must be last");
      Advance();
      AcceptOp("*");
      if (!IsOp(":")) {
        Absorb(children, ParseExpression());
        if (AcceptKw("as")) ExpectName();
      } else {
        bare_seen = true;
      }
      for (AstNode& s : ParseBlock()) children.push_back(std::move(s));
      handlers = true;
    }
    if (AcceptKw("else")) {
      if (!handlers) throw Error("invalid syntax");
      for (AstNode& s : ParseBlock()) children.push_back(std::move(s));
    }
    bool final_block = false;
    if (AcceptKw("finally")) {
      for (AstNode& s : ParseBlock()) children.push_back(std::move(s));
      final_block = true;
    }
    if (!handlers && !final_block) throw Error("expected 'except' or 'finally' block");
    return MakeNode("Try", start, last_end_, std::move(children));
  }

  std::vector<AstNode> ParseWithItems(bool parenthesized) {
    std::vector<AstNode> calls;
    do {
      if (parenthesized && IsOp(")")) break;
      Absorb(calls, ParseExpression());
      if (AcceptKw("as")) {
        Expr target = ParseTargetElement();
        CheckTarget(target);
        Absorb(calls, std::move(target));
      }
    } while (AcceptOp(","));
    return calls;
  }

  AstNode ParseWith(int start, bool is_async) {
    ExpectKw("with");
    std::vector<AstNode> children;
    bool parsed = false;
    if (IsOp("(")) {
      // Parenthesized with-items; fall back to a plain expression if the
      // parenthesis turns out to belong to the first context expression.
      std::size_t save = pos_;
      int save_end = last_end_;
      try {
        Advance();
        std::vector<AstNode> items = ParseWithItems(true);
        ExpectOp(")");
        if (IsOp(":")) {
          children = std::move(items);
          parsed = true;
        }
      } catch (const SyntaxError&) {
      }
      if (!parsed) {
        pos_ = save;
        last_end_ = save_end;
      }
    }
    if (!parsed) children = ParseWithItems(false);
    for (AstNode& s : ParseBlock()) children.push_back(std::move(s));
    return MakeNode(is_async ? "AsyncWith" : "With", start, last_end_,
                    std::move(children));
  }

  AstNode ParseFunction(int start, std::vector<AstNode> decorator_calls,
                        bool is_async) {
    ExpectKw("def");
    ExpectName();
    ExpectOp("(");
    std::vector<AstNode> children = std::move(decorator_calls);
    for (AstNode& c : ParseParameters(")", /*annotations=*/true)) {
      children.push_back(std::move(c));
    }
    ExpectOp(")");
    if (AcceptOp("->")) Absorb(children, ParseExpression());
    for (AstNode& s : ParseBlock()) children.push_back(std::move(s));
    return MakeNode(is_async ? "AsyncFunctionDef" : "FunctionDef", start,
                    last_end_, std::move(children));
  }

  AstNode ParseClass(int start, std::vector<AstNode> decorator_calls) {
    ExpectKw("class");
    ExpectName();
    std::vector<AstNode> children = std::move(decorator_calls);
    if (AcceptOp("(")) {
      for (AstNode& c : ParseArguments()) children.push_back(std::move(c));
      ExpectOp(")");
    }
    for (AstNode& s : ParseBlock()) children.push_back(std::move(s));
    return MakeNode("ClassDef", start, last_end_, std::move(children));
  }

  AstNode ParseDecorated() {
    int start = Cur().line;
    std::vector<AstNode> calls;
    while (AcceptOp("@")) {
      Absorb(calls, ParseNamedExpression());
      ExpectNewline();
    }
    if (IsKw("def")) return ParseFunction(start, std::move(calls), false);
    if (IsKw("class")) return ParseClass(start, std::move(calls));
    if (IsKw("async") && Peek().text == "def") {
      Advance();
      return ParseFunction(start, std::move(calls), true);
    }
    throw Error("invalid syntax");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int last_end_ = 1;
};

void DumpInto(const AstNode& node, int depth, std::ostringstream& out) {
  out << std::string(static_cast<std::size_t>(depth) * 2, ' ')
      << NodeKindName(node.kind) << '(' << node.syntax << ") "
      << node.span.start_line << '-' << node.span.end_line << '\n';
  for (const AstNode& child : node.children) DumpInto(child, depth + 1, out);
}

}  // namespace

std::string_view NodeKindName(NodeKind kind) {
  switch (kind) {
    case NodeKind::kIf: return "If";
    case NodeKind::kSwitch: return "Switch";
    case NodeKind::kWhile: return "While";
    case NodeKind::kFor: return "For";
    case NodeKind::kAssign: return "Assign";
    case NodeKind::kClassDef: return "ClassDef";
    case NodeKind::kCall: return "Call";
    case NodeKind::kFunctionDef: return "FunctionDef";
    case NodeKind::kOther: return "Other";
  }
  return "Other";
}

NodeKind NodeKindFromName(std::string_view name) {
  for (NodeKind k : {NodeKind::kIf, NodeKind::kSwitch, NodeKind::kWhile,
                     NodeKind::kFor, NodeKind::kAssign, NodeKind::kClassDef,
                     NodeKind::kCall, NodeKind::kFunctionDef}) {
    if (NodeKindName(k) == name) return k;
  }
  return NodeKind::kOther;
}

AstNode ParseSourceAst(std::string_view source, std::string_view language) {
  if (language != "python") {
    throw Error(Errc::kInvalidArgument,
                "no parser for source language '" + std::string(language) + "'");
  }
  std::vector<Token> tokens = Lexer(source, 1).Run();
  int line_count = static_cast<int>(SplitLines(source).size());
  return Parser(std::move(tokens)).ParseModule(line_count);
}

int NestingDepth(const AstNode& node) {
  int best = 0;
  for (const AstNode& child : node.children) {
    best = std::max(best, (IsPredefined(child.kind) ? 1 : 0) + NestingDepth(child));
  }
  return best;
}

std::string DumpAst(const AstNode& root) {
  std::ostringstream out;
  DumpInto(root, 0, out);
  return out.str();
}

}  // namespace semloc
