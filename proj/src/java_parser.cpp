#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mutbench/java_ast.hpp"
#include "mutbench/text_util.hpp"

namespace mutbench {

namespace {

const std::set<std::string_view> kModifiers = {
    "public",   "private",   "protected", "static",  "final",
    "abstract", "synchronized", "native", "transient", "volatile",
    "strictfp", "default"};

// Identifier-shaped tokens that never name a call.
const std::set<std::string_view> kStatementKeywords = {
    "if",     "for",   "while",  "switch", "catch",  "return", "new",
    "throw",  "do",    "else",   "try",    "finally", "assert", "break",
    "continue", "case", "default", "synchronized", "instanceof"};

struct ParseError {
  std::size_t offset;
  std::string message;
};

class Parser {
 public:
  Parser(std::string_view text, const std::string& filename,
         ParsedJavaFile& out)
      : text_(text), filename_(filename), out_(out) {}

  void run() {
    LexResult lexed = lex_java(text_);
    if (!lexed.ok) {
      throw ParseError{lexed.error_offset, lexed.error};
    }
    tokens_ = std::move(lexed.tokens);
    parse_compilation_unit();
  }

 private:
  std::string_view text_;
  const std::string& filename_;
  ParsedJavaFile& out_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int anon_counter_ = 0;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    if (i >= tokens_.size()) i = tokens_.size() - 1;
    return tokens_[i];
  }
  const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  bool at_end() const { return peek().kind == TokKind::End; }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError{peek().offset, message};
  }

  void expect_punct(std::string_view p, const std::string& what) {
    if (!(peek().kind == TokKind::Punct && peek().is(p))) {
      fail("expected '" + std::string(p) + "' " + what);
    }
    advance();
  }

  void skip_generics_if_present() {
    if (!(peek().kind == TokKind::Punct && peek().is("<"))) return;
    int depth = 0;
    while (!at_end()) {
      const Token& t = peek();
      if (t.kind == TokKind::Punct && t.is("<")) ++depth;
      if (t.kind == TokKind::Punct && t.is(">")) {
        --depth;
        advance();
        if (depth == 0) return;
        continue;
      }
      // Give up on expressions that merely start with '<'.
      if (t.kind == TokKind::Punct && (t.is(";") || t.is("{") || t.is(")"))) {
        return;
      }
      advance();
    }
  }

  void skip_annotation() {
    advance();  // '@'
    if (peek().is_ident()) {
      advance();
      while (peek().kind == TokKind::Punct && peek().is(".")) {
        advance();
        if (peek().is_ident()) advance();
      }
    }
    if (peek().kind == TokKind::Punct && peek().is("(")) {
      skip_balanced_parens();
    }
  }

  void skip_balanced_parens() {
    int depth = 0;
    while (!at_end()) {
      const Token& t = peek();
      if (t.kind == TokKind::Punct && t.is("(")) ++depth;
      if (t.kind == TokKind::Punct && t.is(")")) {
        --depth;
        advance();
        if (depth == 0) return;
        continue;
      }
      advance();
    }
    fail("unbalanced parentheses");
  }

  void skip_annotations_and_modifiers() {
    while (true) {
      if (peek().kind == TokKind::Punct && peek().is("@")) {
        skip_annotation();
        continue;
      }
      if (peek().is_ident() && kModifiers.count(peek().text) > 0 &&
          !(peek().is("default") /* switch labels never appear here */ &&
            false)) {
        advance();
        continue;
      }
      break;
    }
  }

  // Dotted type reference; returns the text without generic arguments.
  std::string parse_type_ref() {
    if (!peek().is_ident()) fail("expected type name");
    std::string name(advance().text);
    skip_generics_if_present();
    while (peek().kind == TokKind::Punct && peek().is(".") &&
           peek(1).is_ident()) {
      advance();
      name += '.';
      name += peek().text;
      advance();
      skip_generics_if_present();
    }
    return name;
  }

  void parse_compilation_unit() {
    while (!at_end()) {
      if (peek().kind == TokKind::Punct && peek().is(";")) {
        advance();
        continue;
      }
      if (peek().is("package") || peek().is("import")) {
        while (!at_end() && !(peek().kind == TokKind::Punct && peek().is(";"))) {
          advance();
        }
        if (!at_end()) advance();
        continue;
      }
      if (peek().kind == TokKind::Punct && peek().is("@")) {
        skip_annotation();
        continue;
      }
      if (peek().is_ident() && kModifiers.count(peek().text) > 0) {
        advance();
        continue;
      }
      if (peek().is("class") || peek().is("interface") || peek().is("enum")) {
        parse_type_decl(-1, -1, false);
        continue;
      }
      fail("unexpected token at top level: '" + std::string(peek().text) +
           "'");
    }
  }

  int new_class(std::string name, bool is_interface, bool is_anonymous,
                int enclosing_class, int enclosing_method,
                std::size_t decl_offset) {
    JavaClass cls;
    cls.id = static_cast<int>(out_.classes.size());
    cls.name = std::move(name);
    cls.is_interface = is_interface;
    cls.is_anonymous = is_anonymous;
    cls.enclosing_class = enclosing_class;
    cls.enclosing_method = enclosing_method;
    cls.decl_offset = decl_offset;
    out_.classes.push_back(std::move(cls));
    if (enclosing_class >= 0) {
      out_.classes[static_cast<std::size_t>(enclosing_class)]
          .nested_classes.push_back(out_.classes.back().id);
    }
    return out_.classes.back().id;
  }

  int parse_type_decl(int enclosing_class, int enclosing_method,
                      bool is_local) {
    (void)is_local;
    std::size_t decl_offset = peek().offset;
    bool is_interface = peek().is("interface");
    bool is_enum = peek().is("enum");
    advance();  // class/interface/enum
    if (!peek().is_ident()) fail("expected type name");
    std::string name(advance().text);
    skip_generics_if_present();

    std::vector<std::string> extends_types;
    std::vector<std::string> implements_types;
    if (peek().is("extends")) {
      advance();
      extends_types.push_back(parse_type_ref());
      while (peek().kind == TokKind::Punct && peek().is(",")) {
        advance();
        extends_types.push_back(parse_type_ref());
      }
    }
    if (peek().is("implements")) {
      advance();
      implements_types.push_back(parse_type_ref());
      while (peek().kind == TokKind::Punct && peek().is(",")) {
        advance();
        implements_types.push_back(parse_type_ref());
      }
    }
    expect_punct("{", "to open type body");
    int cls_id = new_class(std::move(name), is_interface, false,
                           enclosing_class, enclosing_method, decl_offset);
    out_.classes[static_cast<std::size_t>(cls_id)].extends_types =
        std::move(extends_types);
    out_.classes[static_cast<std::size_t>(cls_id)].implements_types =
        std::move(implements_types);
    out_.classes[static_cast<std::size_t>(cls_id)].body_open =
        tokens_[pos_ - 1].offset;

    if (is_enum) skip_enum_constants();
    parse_class_body(cls_id, enclosing_method);
    return cls_id;
  }

  void skip_enum_constants() {
    // Consume up to the ';' separating constants from members, or stop at
    // the closing brace of a constants-only enum.
    int depth = 0;
    while (!at_end()) {
      const Token& t = peek();
      if (t.kind == TokKind::Punct) {
        if (t.is("{") || t.is("(")) ++depth;
        if (t.is(")")) --depth;
        if (t.is("}")) {
          if (depth == 0) return;  // leave for parse_class_body
          --depth;
        }
        if (t.is(";") && depth == 0) {
          advance();
          return;
        }
      }
      advance();
    }
  }

  void parse_class_body(int cls_id, int enclosing_method) {
    while (true) {
      if (at_end()) fail("unexpected end of file in class body");
      if (peek().kind == TokKind::Punct && peek().is("}")) {
        out_.classes[static_cast<std::size_t>(cls_id)].body_close =
            peek().offset;
        advance();
        return;
      }
      parse_member(cls_id, enclosing_method);
    }
  }

  void parse_member(int cls_id, int enclosing_method) {
    if (peek().kind == TokKind::Punct && peek().is(";")) {
      advance();
      return;
    }
    skip_annotations_and_modifiers();
    if (peek().is("class") || peek().is("interface") || peek().is("enum")) {
      parse_type_decl(cls_id, enclosing_method, false);
      return;
    }
    if (peek().kind == TokKind::Punct && peek().is("{")) {
      skip_balanced_braces();  // static or instance initializer
      return;
    }
    if (peek().kind == TokKind::Punct && peek().is("<")) {
      skip_generics_if_present();  // generic method type parameters
    }

    // Scan the member header to decide between method and field.
    std::size_t header_start = peek().offset;
    std::string last_ident;
    std::string prev_ident;
    while (true) {
      if (at_end()) fail("unexpected end of file in member declaration");
      const Token& t = peek();
      if (t.kind == TokKind::Punct && t.is("(")) {
        parse_method(cls_id, enclosing_method, header_start,
                     prev_ident.empty() ? last_ident : last_ident);
        return;
      }
      if (t.kind == TokKind::Punct && (t.is("=") || t.is(";"))) {
        skip_field_rest();
        return;
      }
      if (t.kind == TokKind::Punct && t.is("{")) {
        fail("unexpected '{' in member declaration");
      }
      if (t.is_ident()) {
        prev_ident = last_ident;
        last_ident = std::string(t.text);
        advance();
        skip_generics_if_present();
        continue;
      }
      advance();
    }
  }

  void skip_field_rest() {
    int brace = 0;
    int paren = 0;
    while (!at_end()) {
      const Token& t = peek();
      if (t.kind == TokKind::Punct) {
        if (t.is("{")) ++brace;
        if (t.is("}")) --brace;
        if (t.is("(")) ++paren;
        if (t.is(")")) --paren;
        if (t.is(";") && brace == 0 && paren == 0) {
          advance();
          return;
        }
      }
      advance();
    }
    fail("unterminated field declaration");
  }

  void skip_balanced_braces() {
    int depth = 0;
    while (!at_end()) {
      const Token& t = peek();
      if (t.kind == TokKind::Punct && t.is("{")) ++depth;
      if (t.kind == TokKind::Punct && t.is("}")) {
        --depth;
        advance();
        if (depth == 0) return;
        continue;
      }
      advance();
    }
    fail("unbalanced braces");
  }

  void parse_method(int cls_id, int enclosing_method, std::size_t decl_offset,
                    const std::string& name) {
    if (name.empty()) fail("method declaration without a name");
    JavaMethod method;
    method.owner = cls_id;
    method.name = name;
    method.decl_offset = decl_offset;

    std::size_t params_open = peek().offset;
    parse_params(method);
    std::size_t params_close = tokens_[pos_ - 1].offset;
    method.params_text = std::string(
        text_.substr(params_open + 1, params_close - params_open - 1));

    if (peek().is("throws")) {
      advance();
      parse_type_ref();
      while (peek().kind == TokKind::Punct && peek().is(",")) {
        advance();
        parse_type_ref();
      }
    }
    if (peek().kind == TokKind::Punct && peek().is(";")) {
      // Abstract or interface method: tolerated, not modeled.
      advance();
      return;
    }
    if (!(peek().kind == TokKind::Punct && peek().is("{"))) {
      fail("expected method body");
    }
    method.body_open = peek().offset;
    method.body_entry = method.body_open + 1;
    advance();

    method.id = static_cast<int>(out_.methods.size());
    out_.methods.push_back(std::move(method));
    out_.classes[static_cast<std::size_t>(cls_id)].methods.push_back(
        out_.methods.back().id);
    int method_id = out_.methods.back().id;
    parse_method_body(method_id, cls_id);
    (void)enclosing_method;
  }

  void parse_params(JavaMethod& method) {
    expect_punct("(", "to open parameter list");
    if (peek().kind == TokKind::Punct && peek().is(")")) {
      advance();
      return;
    }
    while (true) {
      JavaParam param;
      std::vector<std::string> idents;
      int depth = 0;
      std::size_t seg_start = peek().offset;
      std::size_t seg_end = seg_start;
      while (!at_end()) {
        const Token& t = peek();
        if (t.kind == TokKind::Punct && t.is("(")) ++depth;
        if (t.kind == TokKind::Punct && t.is(")") && depth == 0) break;
        if (t.kind == TokKind::Punct && t.is(")")) --depth;
        if (t.kind == TokKind::Punct && t.is(",") && depth == 0) break;
        if (t.kind == TokKind::Punct && t.is("<")) {
          skip_generics_if_present();
          seg_end = tokens_[pos_ - 1].offset + tokens_[pos_ - 1].text.size();
          continue;
        }
        if (t.is_ident() && kModifiers.count(t.text) == 0 && !t.is("final")) {
          idents.push_back(std::string(t.text));
        }
        seg_end = t.offset + t.text.size();
        advance();
      }
      if (!idents.empty()) {
        param.name = idents.back();
        std::string type_text(text_.substr(seg_start, seg_end - seg_start));
        std::size_t cut = type_text.rfind(param.name);
        if (cut != std::string::npos) {
          param.type = trim(type_text.substr(0, cut));
        }
        method.params.push_back(std::move(param));
      }
      if (peek().kind == TokKind::Punct && peek().is(",")) {
        advance();
        continue;
      }
      expect_punct(")", "to close parameter list");
      return;
    }
  }

  // --- method body scanning ----------------------------------------------

  struct CallFrame {
    JavaCallSite site;
    int paren_depth_at_open = 0;
    std::size_t arg_start = 0;
    bool pending_arg = false;
    bool is_ctor = false;           // frame for `new T(...)`
    std::string ctor_type;
    std::vector<std::string> ctor_arg_vars;
    int ctor_anon_arg = -1;
    // per-argument scratch
    int arg_token_count = 0;
    std::string first_ident;
    std::string first_string;
    bool arg_has_new = false;
    std::string arg_new_type;
    int arg_anon_class = -1;
  };

  void parse_method_body(int method_id, int cls_id) {
    int block_depth = 0;
    while (true) {
      if (at_end()) fail("unexpected end of file in method body");
      const Token& t = peek();
      if (t.kind == TokKind::Punct && t.is("}")) {
        if (block_depth == 0) {
          out_.methods[static_cast<std::size_t>(method_id)].body_close =
              t.offset;
          advance();
          return;
        }
        --block_depth;
        advance();
        continue;
      }
      if (t.kind == TokKind::Punct && t.is("{")) {
        ++block_depth;
        advance();
        continue;
      }
      if (t.kind == TokKind::Punct && t.is(";")) {
        advance();
        continue;
      }
      if (t.is("class") || t.is("interface") || t.is("enum")) {
        // Local class declaration.
        record_anchor(method_id, t.offset, block_depth);
        parse_type_decl(cls_id, method_id, true);
        continue;
      }
      record_anchor(method_id, t.offset, block_depth);
      scan_statement(method_id, cls_id, block_depth);
    }
  }

  void record_anchor(int method_id, std::size_t offset, int depth) {
    JavaMethod& m = out_.methods[static_cast<std::size_t>(method_id)];
    JavaStatement stmt;
    stmt.start = offset;
    stmt.end = offset;
    stmt.depth = depth;
    m.statements.push_back(stmt);
    m.statement_anchors.push_back(offset);
  }

  // Scans a single statement starting at the current token. Leaves nested
  // blocks to the caller by incrementing/decrementing depth via recursion
  // into parse-block style scanning.
  void scan_statement(int method_id, int cls_id, int block_depth) {
    JavaMethod* m = &out_.methods[static_cast<std::size_t>(method_id)];
    int stmt_index = static_cast<int>(m->statements.size()) - 1;

    bool statement_keyword =
        peek().is_ident() && kStatementKeywords.count(peek().text) > 0;
    std::string first_word =
        peek().is_ident() ? std::string(peek().text) : std::string();

    // Possible local declaration: Type name = ...
    JavaLocalBinding binding;
    bool have_binding = false;
    bool binding_expects_new = false;
    if (!statement_keyword) {
      have_binding = try_match_binding(binding);
      if (have_binding) {
        binding.statement = stmt_index;
      }
    }

    int paren_depth = 0;
    std::vector<CallFrame> frames;
    std::vector<std::string> chain;
    bool chain_active = false;
    std::string last_closed_new_type;  // `new T(...)` just closed
    bool last_was_call_close = false;
    Token prev{};

    auto flush_arg_into_frame = [&](CallFrame& frame, std::size_t end_offset) {
      if (!frame.pending_arg) return;
      JavaArg arg;
      if (frame.arg_anon_class >= 0) {
        arg.kind = ArgKind::AnonClass;
        arg.anon_class = frame.arg_anon_class;
        arg.text = frame.arg_new_type;
      } else if (frame.arg_has_new) {
        arg.kind = ArgKind::NewInstance;
        arg.text = frame.arg_new_type;
      } else if (frame.arg_token_count == 1 && !frame.first_ident.empty()) {
        arg.kind = ArgKind::Var;
        arg.text = frame.first_ident;
      } else if (frame.arg_token_count == 1 && !frame.first_string.empty()) {
        arg.kind = ArgKind::StringLit;
        arg.text = frame.first_string;
      } else {
        arg.kind = ArgKind::Other;
        arg.text = trim(std::string(
            text_.substr(frame.arg_start, end_offset - frame.arg_start)));
      }
      if (frame.is_ctor) {
        if (arg.kind == ArgKind::Var) frame.ctor_arg_vars.push_back(arg.text);
        if (arg.kind == ArgKind::AnonClass) {
          frame.ctor_anon_arg = arg.anon_class;
        }
      }
      frame.site.args.push_back(std::move(arg));
      frame.pending_arg = false;
      frame.arg_token_count = 0;
      frame.first_ident.clear();
      frame.first_string.clear();
      frame.arg_has_new = false;
      frame.arg_new_type.clear();
      frame.arg_anon_class = -1;
    };

    auto note_arg_token = [&](const Token& t) {
      if (frames.empty()) return;
      CallFrame& frame = frames.back();
      if (paren_depth != frame.paren_depth_at_open + 1) return;
      if (!frame.pending_arg) {
        frame.pending_arg = true;
        frame.arg_start = t.offset;
      }
      ++frame.arg_token_count;
      if (t.is_ident() && frame.arg_token_count == 1) {
        frame.first_ident = std::string(t.text);
      }
      if (t.kind == TokKind::String && frame.arg_token_count == 1) {
        frame.first_string = std::string(t.text);
      }
    };

    while (true) {
      if (at_end()) fail("unexpected end of file in statement");
      const Token& t = peek();

      if (t.kind == TokKind::Punct && t.is(";") && paren_depth == 0) {
        std::size_t end = t.offset + 1;
        advance();
        m = &out_.methods[static_cast<std::size_t>(method_id)];
        m->statements[static_cast<std::size_t>(stmt_index)].end = end;
        if (have_binding) m->locals.push_back(binding);
        return;
      }

      if (t.kind == TokKind::Punct && t.is("}") && paren_depth == 0) {
        // Statement ended without ';' (e.g. before a closing block brace).
        m = &out_.methods[static_cast<std::size_t>(method_id)];
        m->statements[static_cast<std::size_t>(stmt_index)].end = t.offset;
        if (have_binding) m->locals.push_back(binding);
        return;
      }

      if (t.is("new")) {
        std::size_t new_offset = t.offset;
        advance();
        handle_new_expression(method_id, cls_id, stmt_index, frames,
                              binding_expects_new ? &binding : nullptr,
                              note_arg_token, flush_arg_into_frame,
                              last_closed_new_type, new_offset, paren_depth,
                              block_depth);
        m = &out_.methods[static_cast<std::size_t>(method_id)];
        binding_expects_new = false;
        chain.clear();
        chain_active = false;
        last_was_call_close = false;
        prev = Token{TokKind::Punct, ")", 0};
        continue;
      }

      if (t.is_ident()) {
        if (kStatementKeywords.count(t.text) == 0) {
          if (chain_active && prev.kind == TokKind::Punct && prev.is(".")) {
            chain.push_back(std::string(t.text));
          } else {
            chain.assign(1, std::string(t.text));
            chain_active = true;
          }
        } else {
          chain.clear();
          chain_active = false;
        }
        note_arg_token(t);
        if (binding_expects_new) binding_expects_new = false;
        prev = t;
        advance();
        last_was_call_close = false;
        last_closed_new_type.clear();
        continue;
      }

      if (t.kind == TokKind::Punct && t.is("(")) {
        if (chain_active && !chain.empty()) {
          CallFrame frame;
          frame.site.offset = prev.offset;
          frame.site.statement = stmt_index;
          frame.site.name = chain.back();
          if (chain.size() > 1) {
            std::string receiver = chain[0];
            for (std::size_t i = 1; i + 1 < chain.size(); ++i) {
              receiver += '.';
              receiver += chain[i];
            }
            frame.site.receiver = receiver;
          }
          if (!last_closed_new_type.empty()) {
            frame.site.receiver_new_type = last_closed_new_type;
          }
          frame.paren_depth_at_open = paren_depth;
          frames.push_back(std::move(frame));
        } else if (last_was_call_close || !last_closed_new_type.empty()) {
          // `foo().bar(` or `new T().bar(` with no identifier chain handled
          // above; nothing to record.
        }
        ++paren_depth;
        chain.clear();
        chain_active = false;
        prev = t;
        advance();
        last_was_call_close = false;
        continue;
      }

      if (t.kind == TokKind::Punct && t.is(")")) {
        --paren_depth;
        if (!frames.empty() &&
            paren_depth == frames.back().paren_depth_at_open) {
          flush_arg_into_frame(frames.back(), t.offset);
          CallFrame done = std::move(frames.back());
          frames.pop_back();
          m = &out_.methods[static_cast<std::size_t>(method_id)];
          m->calls.push_back(done.site);
          last_was_call_close = true;
        } else {
          last_was_call_close = false;
        }
        prev = t;
        advance();
        last_closed_new_type.clear();
        continue;
      }

      if (t.kind == TokKind::Punct && t.is(",")) {
        if (!frames.empty() &&
            paren_depth == frames.back().paren_depth_at_open + 1) {
          flush_arg_into_frame(frames.back(), t.offset);
        }
        chain.clear();
        chain_active = false;
        prev = t;
        advance();
        continue;
      }

      if (t.kind == TokKind::Punct && t.is("{") && paren_depth == 0) {
        bool control_block =
            (prev.kind == TokKind::Punct && prev.is(")")) ||
            (prev.is_ident() &&
             (prev.is("else") || prev.is("do") || prev.is("try") ||
              prev.is("finally")));
        if (control_block || statement_keyword) {
          scan_block(method_id, cls_id, block_depth + 1);
          m = &out_.methods[static_cast<std::size_t>(method_id)];
          // Chained continuations: else / catch / finally / do-while.
          if (peek().is("else") || peek().is("catch") || peek().is("finally") ||
              (first_word == "do" && peek().is("while"))) {
            prev = Token{};
            continue;
          }
          m->statements[static_cast<std::size_t>(stmt_index)].end =
              tokens_[pos_ - 1].offset + 1;
          if (have_binding) m->locals.push_back(binding);
          return;
        }
        // Array or collection initializer: skip without anchoring.
        skip_balanced_braces();
        prev = Token{TokKind::Punct, "}", 0};
        continue;
      }

      if (t.kind == TokKind::Punct && t.is("=")) {
        if (have_binding && frames.empty() && paren_depth == 0) {
          binding_expects_new = true;
        }
        chain.clear();
        chain_active = false;
        note_arg_token(t);
        prev = t;
        advance();
        continue;
      }

      if (t.kind == TokKind::Punct && !t.is(".")) {
        chain.clear();
        chain_active = false;
      }
      note_arg_token(t);
      prev = t;
      advance();
      last_was_call_close = false;
      if (!(t.kind == TokKind::Punct && t.is("."))) {
        last_closed_new_type.clear();
      }
    }
  }

  void scan_block(int method_id, int cls_id, int depth) {
    advance();  // '{'
    while (true) {
      if (at_end()) fail("unexpected end of file in block");
      const Token& t = peek();
      if (t.kind == TokKind::Punct && t.is("}")) {
        advance();
        return;
      }
      if (t.kind == TokKind::Punct && t.is(";")) {
        advance();
        continue;
      }
      if (t.kind == TokKind::Punct && t.is("{")) {
        scan_block(method_id, cls_id, depth + 1);
        continue;
      }
      if (t.is("class") || t.is("interface") || t.is("enum")) {
        record_anchor(method_id, t.offset, depth);
        parse_type_decl(cls_id, method_id, true);
        continue;
      }
      record_anchor(method_id, t.offset, depth);
      scan_statement(method_id, cls_id, depth);
    }
  }

  template <typename NoteArg, typename FlushArg>
  void handle_new_expression(int method_id, int cls_id, int stmt_index,
                             std::vector<CallFrame>& frames,
                             JavaLocalBinding* binding, NoteArg& note_arg_token,
                             FlushArg& flush_arg_into_frame,
                             std::string& last_closed_new_type,
                             std::size_t new_offset, int& paren_depth,
                             int block_depth) {
    (void)flush_arg_into_frame;
    (void)block_depth;
    if (!peek().is_ident()) {
      return;  // e.g. `new int[...]` handled by the number branch upstream
    }
    std::string type = parse_type_ref();

    if (peek().kind == TokKind::Punct && peek().is("[")) {
      // Array creation; let the main scanner continue.
      return;
    }

    std::vector<std::string> ctor_arg_vars;
    if (peek().kind == TokKind::Punct && peek().is("(")) {
      // Scan constructor arguments with a lightweight frame of our own,
      // recursing for nested `new` expressions.
      advance();
      int depth = 1;
      int top_tokens = 0;
      std::string sole_ident;
      auto flush_ctor_arg = [&]() {
        if (top_tokens == 1 && !sole_ident.empty()) {
          ctor_arg_vars.push_back(sole_ident);
        }
        top_tokens = 0;
        sole_ident.clear();
      };
      while (true) {
        if (at_end()) fail("unbalanced constructor arguments");
        const Token& t = peek();
        if (t.kind == TokKind::Punct && t.is("(")) {
          ++depth;
          advance();
          continue;
        }
        if (t.kind == TokKind::Punct && t.is(")")) {
          --depth;
          advance();
          if (depth == 0) {
            flush_ctor_arg();
            break;
          }
          continue;
        }
        if (t.kind == TokKind::Punct && t.is(",") && depth == 1) {
          flush_ctor_arg();
          advance();
          continue;
        }
        if (t.is("new")) {
          std::size_t inner_offset = t.offset;
          advance();
          handle_new_expression(method_id, cls_id, stmt_index, frames, nullptr,
                                note_arg_token, flush_arg_into_frame,
                                last_closed_new_type, inner_offset, paren_depth,
                                block_depth);
          top_tokens += 2;
          continue;
        }
        if (depth == 1) {
          ++top_tokens;
          if (t.is_ident() && top_tokens == 1) {
            sole_ident = std::string(t.text);
          }
        }
        advance();
      }
    }

    int anon_id = -1;
    if (peek().kind == TokKind::Punct && peek().is("{")) {
      // Anonymous class body.
      std::size_t body_open = peek().offset;
      advance();
      ++anon_counter_;
      std::string anon_name =
          "<anon:" + type + "#" + std::to_string(anon_counter_) + ">";
      anon_id = new_class(anon_name, false, true, cls_id, method_id,
                          new_offset);
      out_.classes[static_cast<std::size_t>(anon_id)].extends_types.push_back(
          type);
      out_.classes[static_cast<std::size_t>(anon_id)].body_open = body_open;
      parse_class_body(anon_id, method_id);
    }

    // Attribute the expression to the surrounding context.
    if (binding != nullptr) {
      binding->new_type = type;
      binding->anon_class = anon_id;
      binding->ctor_arg_vars = ctor_arg_vars;
    }
    if (!frames.empty() &&
        paren_depth == frames.back().paren_depth_at_open + 1) {
      CallFrame& frame = frames.back();
      if (!frame.pending_arg) {
        frame.pending_arg = true;
        frame.arg_start = new_offset;
      }
      frame.arg_token_count += 2;  // force non-Var classification
      frame.arg_has_new = true;
      frame.arg_new_type = type;
      if (anon_id >= 0) frame.arg_anon_class = anon_id;
    }
    last_closed_new_type = type;
  }

  // Matches `[final] Type name =` at the current position without consuming
  // input; on success fills `binding` (the scanner still walks the tokens).
  bool try_match_binding(JavaLocalBinding& binding) {
    std::size_t i = pos_;
    auto tok = [&](std::size_t k) -> const Token& {
      std::size_t idx = i + k;
      if (idx >= tokens_.size()) idx = tokens_.size() - 1;
      return tokens_[idx];
    };
    std::size_t k = 0;
    if (tok(k).is("final")) ++k;
    if (!tok(k).is_ident()) return false;
    std::string type(tok(k).text);
    ++k;
    // Dotted type.
    while (tok(k).kind == TokKind::Punct && tok(k).is(".") &&
           tok(k + 1).is_ident()) {
      type += '.';
      type += tok(k + 1).text;
      k += 2;
    }
    // Array suffix.
    while (tok(k).kind == TokKind::Punct && tok(k).is("[") &&
           tok(k + 1).kind == TokKind::Punct && tok(k + 1).is("]")) {
      type += "[]";
      k += 2;
    }
    // Optional generics: a '<' here is only accepted when a matching '>'
    // appears before any statement terminator.
    if (tok(k).kind == TokKind::Punct && tok(k).is("<")) {
      int depth = 0;
      std::size_t j = k;
      while (true) {
        const Token& t = tok(j);
        if (t.kind == TokKind::End) return false;
        if (t.kind == TokKind::Punct && t.is("<")) ++depth;
        if (t.kind == TokKind::Punct && t.is(">")) {
          --depth;
          if (depth == 0) {
            k = j + 1;
            break;
          }
        }
        if (t.kind == TokKind::Punct && (t.is(";") || t.is("{"))) return false;
        ++j;
      }
    }
    if (!tok(k).is_ident()) return false;
    std::string name(tok(k).text);
    ++k;
    if (!(tok(k).kind == TokKind::Punct && tok(k).is("="))) return false;
    binding.name = std::move(name);
    binding.type = std::move(type);
    return true;
  }
};

}  // namespace

ParsedJavaFile parse_java(std::string_view text, const std::string& filename) {
  ParsedJavaFile out;
  Parser parser(text, filename, out);
  try {
    parser.run();
    out.ok = true;
  } catch (const ParseError& e) {
    out.ok = false;
    LineIndex index = LineIndex::build(text);
    auto [line, column] = index.locate(e.offset);
    out.error = Diagnostic{Severity::Error, filename, line, column, e.message};
    out.classes.clear();
    out.methods.clear();
  }
  return out;
}

}  // namespace mutbench
