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

#ifndef SEMLOC_PYAST_HPP_
#define SEMLOC_PYAST_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace semloc {

// The eight node kinds decomposition splits at, plus Other for everything
// else. Switch exists for source languages that have it; the Python front
// end never produces it.
enum class NodeKind {
  kIf,
  kSwitch,
  kWhile,
  kFor,
  kAssign,
  kClassDef,
  kCall,
  kFunctionDef,
  kOther,
};

std::string_view NodeKindName(NodeKind kind);
NodeKind NodeKindFromName(std::string_view name);  // kOther if unknown

constexpr bool IsPredefined(NodeKind kind) { return kind != NodeKind::kOther; }

// Inclusive 1-based line range.
struct Span {
  int start_line = 0;
  int end_line = 0;

  bool Contains(const Span& other) const {
    return start_line <= other.start_line && other.end_line <= end_line;
  }
  friend bool operator==(const Span&, const Span&) = default;
};

// A reduced syntax tree: every statement is a node, every call expression
// is a node, and all other expression structure is flattened away (calls
// found inside it hang off the nearest enclosing statement or call).
// `syntax` names the concrete construct ("Module", "AugAssign", "Return").
struct AstNode {
  NodeKind kind = NodeKind::kOther;
  std::string syntax;
  Span span;
  std::vector<AstNode> children;
};

// Parses Python 3 source. Throws SyntaxError (with line/column) on invalid
// input and InvalidArgument for languages other than "python".
//
// Spans follow the reference parser: a statement ends on the line of its
// last token, a compound statement on the last line of its last clause. A
// decorated def/class starts at its first decorator so that decorator calls
// stay inside the node.
AstNode ParseSourceAst(std::string_view source, std::string_view language);

// Largest number of predefined-kind nodes on any path strictly below `node`.
int NestingDepth(const AstNode& node);

// Indented "Kind(Syntax) start-end" lines, one per node in pre-order.
std::string DumpAst(const AstNode& root);

}  // namespace semloc

#endif  // SEMLOC_PYAST_HPP_
