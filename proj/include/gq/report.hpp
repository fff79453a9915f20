#pragma once

// The table of regular-subgroup counts per q, as Markdown, CSV or JSON.

#include <string>
#include <vector>

#include "json.hpp"

#include "gq/error.hpp"
#include "gq/regular_search.hpp"

namespace gq {

struct Table3Row {
  std::uint64_t q = 0;
  std::size_t classes = 0;
  int isomorphism_types = 0;
  std::string comment;
  bool complete = true;
};

inline Table3Row table3_row(const RegularClassTable& t) {
  return {t.q, t.num_classes(), t.num_isomorphism_types, t.comment(), t.complete};
}

/// A row from the JSON written by enumerate-regular.
inline Table3Row table3_row(const nlohmann::ordered_json& j) {
  try {
    Table3Row r;
    r.q = j.at("gq").value("q", std::uint64_t{0});
    r.classes = j.at("num_classes").get<std::size_t>();
    r.isomorphism_types = j.at("num_isomorphism_types").get<int>();
    r.comment = j.at("comment").get<std::string>();
    r.complete = j.at("complete").get<bool>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("not an enumeration result: ") + e.what());
  }
}

namespace detail {

inline void require_complete(const std::vector<Table3Row>& rows, bool allow_partial) {
  if (allow_partial) return;
  for (const auto& r : rows)
    if (!r.complete)
      throw RefusesIncomplete("enumeration for q = " + std::to_string(r.q) + " is incomplete; pass --allow-partial");
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

inline std::string table3_markdown(const std::vector<Table3Row>& rows, bool allow_partial = false) {
  detail::require_complete(rows, allow_partial);
  std::string out = "| q | #classes | comments |\n|---|---|---|\n";
  for (const auto& r : rows)
    out += "| " + std::to_string(r.q) + " | " + std::to_string(r.classes) + " | " + r.comment + " |\n";
  return out;
}

inline std::string table3_csv(const std::vector<Table3Row>& rows, bool allow_partial = false) {
  detail::require_complete(rows, allow_partial);
  std::string out = "q,classes,comments\r\n";
  for (const auto& r : rows)
    out += std::to_string(r.q) + "," + std::to_string(r.classes) + "," + detail::csv_field(r.comment) + "\r\n";
  return out;
}

inline std::string table3_json(const std::vector<Table3Row>& rows, bool allow_partial = false) {
  detail::require_complete(rows, allow_partial);
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows)
    arr.push_back({{"q", r.q},
                   {"classes", r.classes},
                   {"isomorphism_types", r.isomorphism_types},
                   {"comments", r.comment},
                   {"complete", r.complete}});
  return arr.dump(2) + "\n";
}

}  // namespace gq
