#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mutbench/diagnostics.hpp"

namespace mutbench {

struct XmlAttribute {
  std::string name;
  std::string value;
  std::size_t offset = 0;  // offset of the attribute name
};

struct XmlElement {
  std::string name;
  std::vector<XmlAttribute> attributes;
  std::size_t offset = 0;
  int parent = -1;
};

struct ParsedXmlFile {
  bool ok = false;
  Diagnostic error;
  std::vector<XmlElement> elements;  // document order

  const XmlAttribute* find_attribute(const XmlElement& element,
                                     std::string_view name) const;
};

ParsedXmlFile parse_xml(std::string_view text, const std::string& filename);

}  // namespace mutbench
