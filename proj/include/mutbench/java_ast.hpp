#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mutbench/diagnostics.hpp"

namespace mutbench {

// Lexer ----------------------------------------------------------------

enum class TokKind { Identifier, Number, String, Char, Punct, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string_view text;
  std::size_t offset = 0;

  bool is(std::string_view t) const { return text == t; }
  bool is_ident() const { return kind == TokKind::Identifier; }
};

struct LexResult {
  std::vector<Token> tokens;  // terminated by an End token
  bool ok = true;
  std::string error;
  std::size_t error_offset = 0;
};

LexResult lex_java(std::string_view text);

// Structural parse results ----------------------------------------------
//
// The parser recognizes the constructs the rewriting passes need: type
// declarations (including nested, local and anonymous classes), concrete
// method bodies with statement boundaries, local variable bindings, and
// call sites with coarsely classified arguments. Generics, annotations and
// lambdas are tolerated but not modeled.

struct JavaParam {
  std::string type;
  std::string name;
};

enum class ArgKind { Var, AnonClass, NewInstance, StringLit, Other };

struct JavaArg {
  ArgKind kind = ArgKind::Other;
  std::string text;     // var name, new'd type, literal value, or raw slice
  int anon_class = -1;  // index into ParsedJavaFile::classes
};

struct JavaCallSite {
  std::size_t offset = 0;     // offset of the callee name token
  int statement = -1;         // index into JavaMethod::statements
  std::string receiver;       // dotted prefix, "" for unqualified calls
  std::string receiver_new_type;  // set for `new T(...).m(...)` chains
  std::string name;
  std::vector<JavaArg> args;
};

struct JavaLocalBinding {
  std::string name;
  std::string type;           // declared type text ("" for plain assignment)
  int anon_class = -1;        // rhs `new T(...){...}` anonymous class
  std::string new_type;       // rhs `new T(...)` type name, "" otherwise
  std::vector<std::string> ctor_arg_vars;  // identifiers passed to the ctor
  int statement = -1;
};

struct JavaStatement {
  std::size_t start = 0;  // offset of the first token
  std::size_t end = 0;    // one past the last consumed byte
  int depth = 0;          // 0 = top level of the method body
};

struct JavaMethod {
  int id = -1;
  int owner = -1;  // index into ParsedJavaFile::classes
  std::string name;
  std::vector<JavaParam> params;
  std::string params_text;  // verbatim parameter list without parens
  std::size_t decl_offset = 0;
  std::size_t body_open = 0;   // offset of '{'
  std::size_t body_close = 0;  // offset of '}'
  std::size_t body_entry = 0;  // insertion offset just after '{'
  std::vector<JavaStatement> statements;
  std::vector<std::size_t> statement_anchors;  // statement start offsets
  std::vector<JavaCallSite> calls;
  std::vector<JavaLocalBinding> locals;
};

struct JavaClass {
  int id = -1;
  std::string name;  // simple name; anonymous classes get "<anon:Super#n>"
  std::vector<std::string> extends_types;
  std::vector<std::string> implements_types;
  bool is_anonymous = false;
  bool is_interface = false;
  int enclosing_class = -1;
  int enclosing_method = -1;
  std::size_t decl_offset = 0;
  std::size_t body_open = 0;
  std::size_t body_close = 0;
  std::vector<int> methods;
  std::vector<int> nested_classes;

  std::vector<std::string> supertypes() const {
    std::vector<std::string> all = extends_types;
    all.insert(all.end(), implements_types.begin(), implements_types.end());
    return all;
  }
};

struct ParsedJavaFile {
  bool ok = false;
  Diagnostic error;  // valid when !ok
  std::vector<JavaClass> classes;
  std::vector<JavaMethod> methods;
};

ParsedJavaFile parse_java(std::string_view text, const std::string& filename);

}  // namespace mutbench
