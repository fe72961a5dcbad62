#include "mutbench/xml_doc.hpp"

#include <cctype>

#include "mutbench/text_util.hpp"

namespace mutbench {

namespace {

struct XmlError {
  std::size_t offset;
  std::string message;
};

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == ':' || c == '_' ||
         c == '-' || c == '.';
}

class XmlScanner {
 public:
  XmlScanner(std::string_view text, ParsedXmlFile& out)
      : text_(text), out_(out) {}

  void run() {
    std::vector<int> stack;
    std::size_t i = 0;
    while (i < text_.size()) {
      if (text_[i] != '<') {
        ++i;
        continue;
      }
      std::size_t tag_start = i;
      if (starts_with(text_.substr(i), "<?")) {
        std::size_t end = text_.find("?>", i);
        if (end == std::string_view::npos) {
          throw XmlError{i, "unterminated processing instruction"};
        }
        i = end + 2;
        continue;
      }
      if (starts_with(text_.substr(i), "<!--")) {
        std::size_t end = text_.find("-->", i);
        if (end == std::string_view::npos) {
          throw XmlError{i, "unterminated comment"};
        }
        i = end + 3;
        continue;
      }
      if (starts_with(text_.substr(i), "<!")) {
        std::size_t end = text_.find('>', i);
        if (end == std::string_view::npos) {
          throw XmlError{i, "unterminated declaration"};
        }
        i = end + 1;
        continue;
      }
      if (starts_with(text_.substr(i), "</")) {
        i += 2;
        std::size_t name_start = i;
        while (i < text_.size() && is_name_char(text_[i])) ++i;
        std::string name(text_.substr(name_start, i - name_start));
        while (i < text_.size() && text_[i] != '>') ++i;
        if (i >= text_.size()) {
          throw XmlError{tag_start, "unterminated closing tag"};
        }
        ++i;
        if (stack.empty()) {
          throw XmlError{tag_start, "closing tag without opener: " + name};
        }
        const XmlElement& open =
            out_.elements[static_cast<std::size_t>(stack.back())];
        if (open.name != name) {
          throw XmlError{tag_start, "mismatched closing tag: expected </" +
                                        open.name + ">, found </" + name +
                                        ">"};
        }
        stack.pop_back();
        continue;
      }
      // Opening tag.
      ++i;
      std::size_t name_start = i;
      while (i < text_.size() && is_name_char(text_[i])) ++i;
      if (i == name_start) {
        throw XmlError{tag_start, "malformed tag"};
      }
      XmlElement element;
      element.name = std::string(text_.substr(name_start, i - name_start));
      element.offset = tag_start;
      element.parent = stack.empty() ? -1 : stack.back();

      bool self_closing = false;
      while (i < text_.size()) {
        while (i < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[i]))) {
          ++i;
        }
        if (i >= text_.size()) {
          throw XmlError{tag_start, "unterminated tag"};
        }
        if (text_[i] == '>') {
          ++i;
          break;
        }
        if (text_[i] == '/' && i + 1 < text_.size() && text_[i + 1] == '>') {
          self_closing = true;
          i += 2;
          break;
        }
        std::size_t attr_start = i;
        while (i < text_.size() && is_name_char(text_[i])) ++i;
        if (i == attr_start) {
          throw XmlError{attr_start, "malformed attribute"};
        }
        XmlAttribute attribute;
        attribute.name = std::string(text_.substr(attr_start, i - attr_start));
        attribute.offset = attr_start;
        while (i < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[i]))) {
          ++i;
        }
        if (i < text_.size() && text_[i] == '=') {
          ++i;
          while (i < text_.size() &&
                 std::isspace(static_cast<unsigned char>(text_[i]))) {
            ++i;
          }
          if (i >= text_.size() || (text_[i] != '"' && text_[i] != '\'')) {
            throw XmlError{i, "attribute value must be quoted"};
          }
          char quote = text_[i];
          ++i;
          std::size_t value_start = i;
          while (i < text_.size() && text_[i] != quote) ++i;
          if (i >= text_.size()) {
            throw XmlError{value_start, "unterminated attribute value"};
          }
          attribute.value =
              std::string(text_.substr(value_start, i - value_start));
          ++i;
        }
        element.attributes.push_back(std::move(attribute));
      }

      out_.elements.push_back(std::move(element));
      if (!self_closing) {
        stack.push_back(static_cast<int>(out_.elements.size()) - 1);
      }
    }
    if (!stack.empty()) {
      const XmlElement& open =
          out_.elements[static_cast<std::size_t>(stack.back())];
      throw XmlError{open.offset, "unclosed element: " + open.name};
    }
  }

 private:
  std::string_view text_;
  ParsedXmlFile& out_;
};

}  // namespace

const XmlAttribute* ParsedXmlFile::find_attribute(const XmlElement& element,
                                                  std::string_view name) const {
  for (const auto& attribute : element.attributes) {
    if (attribute.name == name) return &attribute;
  }
  return nullptr;
}

ParsedXmlFile parse_xml(std::string_view text, const std::string& filename) {
  ParsedXmlFile out;
  XmlScanner scanner(text, out);
  try {
    scanner.run();
    out.ok = true;
  } catch (const XmlError& e) {
    out.ok = false;
    LineIndex index = LineIndex::build(text);
    auto [line, column] = index.locate(e.offset);
    out.error = Diagnostic{Severity::Error, filename, line, column, e.message};
    out.elements.clear();
  }
  return out;
}

}  // namespace mutbench
