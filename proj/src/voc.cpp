/********************************************************************************
* Copyright 2026 The EBLC Authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*    http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
********************************************************************************/

#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "eblc/detect.hpp"
#include "eblc/error.hpp"

namespace eblc {
namespace {

namespace pt = boost::property_tree;

const pt::ptree& child(const pt::ptree& node, const std::string& name,
                       const std::string& path) {
  const auto found = node.get_child_optional(name);
  if (!found) throw Error(ErrorCode::MissingField, path);
  return *found;
}

int coordinate(const pt::ptree& bndbox, const std::string& name) {
  const std::string path = "object/bndbox/" + name;
  std::string text = child(bndbox, name, path).data();
  const auto first = text.find_first_not_of(" \t\r\n");
  const auto last = text.find_last_not_of(" \t\r\n");
  if (first == std::string::npos) throw Error(ErrorCode::MalformedXml, path + " is empty");
  text = text.substr(first, last - first + 1);

  int value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw Error(ErrorCode::MalformedXml, path + " is not an integer: '" + text + "'");
  }
  return value;
}

}  // namespace

std::vector<Annotation> parse_voc(std::string_view xml, std::string_view frame_id) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(xml)};
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::MalformedXml, e.what());
  }
  const auto root = tree.get_child_optional("annotation");
  if (!root) throw Error(ErrorCode::MissingField, "annotation");

  std::string id(frame_id);
  if (const auto name = root->get_optional<std::string>("filename")) id = *name;

  std::vector<Annotation> out;
  for (const auto& [tag, node] : *root) {
    if (tag != "object") continue;
    Annotation a;
    a.class_label = child(node, "name", "object/name").data();
    const pt::ptree& bndbox = child(node, "bndbox", "object/bndbox");
    a.box = {static_cast<double>(coordinate(bndbox, "xmin")),
             static_cast<double>(coordinate(bndbox, "ymin")),
             static_cast<double>(coordinate(bndbox, "xmax")),
             static_cast<double>(coordinate(bndbox, "ymax"))};
    if (!a.box.valid()) {
      throw Error(ErrorCode::MalformedXml, "object/bndbox must have xmin < xmax and ymin < ymax");
    }
    a.frame_id = id;
    out.push_back(std::move(a));
  }
  return out;
}

std::string write_voc(std::span<const Annotation> annotations, std::string_view filename,
                      int width, int height) {
  std::ostringstream out;
  out << "<annotation>\n";
  out << "  <filename>" << filename << "</filename>\n";
  out << "  <size><width>" << width << "</width><height>" << height
      << "</height><depth>3</depth></size>\n";
  for (const Annotation& a : annotations) {
    out << "  <object>\n";
    out << "    <name>" << a.class_label << "</name>\n";
    out << "    <bndbox><xmin>" << std::lround(a.box.x_min) << "</xmin><ymin>"
        << std::lround(a.box.y_min) << "</ymin><xmax>" << std::lround(a.box.x_max)
        << "</xmax><ymax>" << std::lround(a.box.y_max) << "</ymax></bndbox>\n";
    out << "  </object>\n";
  }
  out << "</annotation>\n";
  return out.str();
}

}  // namespace eblc
