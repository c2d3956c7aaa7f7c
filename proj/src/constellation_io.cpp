#include "imdd/constellation_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace imdd {

using nlohmann::json;

std::string to_json(const Constellation& c, int indent) {
  json points = json::array();
  for (const auto& p : c.points()) {
    json row = json::array();
    for (std::size_t k = 0; k < c.dim(); ++k) row.push_back(p[k]);
    points.push_back(std::move(row));
  }
  json doc;
  doc["name"] = c.name();
  doc["bandwidth_model"] = std::string(to_string(c.bandwidth_model()));
  doc["points"] = std::move(points);
  return doc.dump(indent) + "\n";
}

Constellation constellation_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::invalid_argument, std::string("malformed constellation JSON: ") + e.what());
  }
  try {
    auto name = doc.at("name").get<std::string>();
    auto model = parse_bandwidth_model(doc.at("bandwidth_model").get<std::string>());
    auto rows = doc.at("points").get<std::vector<std::vector<double>>>();
    return Constellation::from_rows(std::move(name), model, rows);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::invalid_argument, std::string("constellation JSON schema error: ") + e.what());
  }
}

void save_constellation(const Constellation& c, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::invalid_argument, "cannot write " + path.string());
  out << to_json(c);
}

Constellation load_constellation(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_argument, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return constellation_from_json(buf.str());
}

}  // namespace imdd
