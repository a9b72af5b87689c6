#include "bellfilter/state_json.hpp"

#include <fstream>
#include <sstream>

#include "bellfilter/error.hpp"
#include "json.hpp"

namespace bellfilter {
namespace {

using nlohmann::json;

Eigen::Matrix4d read_block(const json& doc, const char* key) {
  const json& rows = doc.at(key);
  if (!rows.is_array() || rows.size() != 4)
    throw Error(ErrorCode::InvalidInput,
                std::string("\"") + key + "\" must be a 4x4 array");
  Eigen::Matrix4d m;
  for (int i = 0; i < 4; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != 4)
      throw Error(ErrorCode::InvalidInput,
                  std::string("\"") + key + "\" row " + std::to_string(i) +
                      " must have 4 entries");
    for (int j = 0; j < 4; ++j) {
      const json& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number())
        throw Error(ErrorCode::InvalidInput,
                    std::string("\"") + key + "\" entries must be numbers");
      m(i, j) = v.get<double>();
    }
  }
  return m;
}

}  // namespace

DensityMatrix parse_state_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("re"))
    throw Error(ErrorCode::InvalidInput, "state JSON needs an \"re\" member");

  const Eigen::Matrix4d re = read_block(doc, "re");
  const Eigen::Matrix4d im =
      doc.contains("im") ? read_block(doc, "im") : Eigen::Matrix4d::Zero();
  Matrix4c m;
  m.real() = re;
  m.imag() = im;
  return make_density(m);
}

DensityMatrix load_state_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::InvalidInput, "cannot open state file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_state_json(buf.str());
}

std::string state_to_json(const DensityMatrix& rho, int indent) {
  json re = json::array();
  json im = json::array();
  for (int i = 0; i < 4; ++i) {
    json rr = json::array();
    json ri = json::array();
    for (int j = 0; j < 4; ++j) {
      rr.push_back(rho(i, j).real());
      ri.push_back(rho(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return json{{"re", re}, {"im", im}}.dump(indent);
}

}  // namespace bellfilter
