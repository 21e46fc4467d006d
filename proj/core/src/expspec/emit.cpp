#include <ostream>

#include <json.hpp>

#include "qfc/expspec.hpp"

namespace qfc::expspec {
namespace {

// RFC 4180: quote fields containing commas, quotes or line breaks; double
// any embedded quotes.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

struct CsvCell {
  std::ostream& os;
  void operator()(int64_t v) const { os << v; }
  void operator()(double v) const { os << format_double(v); }
  void operator()(const std::string& v) const { os << csv_field(v); }
};

struct JsonCell {
  nlohmann::json& row;
  void operator()(int64_t v) const { row.push_back(v); }
  void operator()(double v) const { row.push_back(v); }
  void operator()(const std::string& v) const { row.push_back(v); }
};

}  // namespace

void emit_csv(const ResultTable& table, std::ostream& os) {
  for (size_t i = 0; i < table.columns.size(); ++i) {
    if (i) os << ',';
    os << csv_field(table.columns[i]);
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      std::visit(CsvCell{os}, row[i]);
    }
    os << '\n';
  }
}

void emit_json(const ResultTable& table, std::ostream& os) {
  nlohmann::json doc;
  doc["columns"] = table.columns;
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json jrow = nlohmann::json::array();
    for (const auto& cell : row) {
      std::visit(JsonCell{jrow}, cell);
    }
    doc["rows"].push_back(std::move(jrow));
  }
  os << doc.dump(2) << '\n';
}

}  // namespace qfc::expspec
