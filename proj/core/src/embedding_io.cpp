#include "amuse/embedding_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "amuse/errors.hpp"

namespace amuse {

using nlohmann::json;

std::string embedding_to_json(const LearnedEmbedding& embedding) {
  json doc;
  doc["n"] = embedding.dim();
  doc["r"] = embedding.rank_budget();
  doc["scale"] = embedding.scale();
  doc["trace_budget"] = embedding.trace();
  doc["label"] = embedding.label();
  json factors = json::array();
  json mask = json::array();
  for (const auto& f : embedding.factors()) {
    json row = json::array();
    for (Eigen::Index i = 0; i < embedding.dim(); ++i) {
      row.push_back(f.is_zero() ? 0.0 : f.direction[i]);
    }
    factors.push_back(std::move(row));
    mask.push_back(f.is_zero());
  }
  doc["factors"] = std::move(factors);
  doc["zero_mask"] = std::move(mask);
  return doc.dump(1);
}

LearnedEmbedding embedding_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("embedding JSON: ") + e.what(), 0);
  }
  try {
    const auto n = doc.at("n").get<Eigen::Index>();
    const auto r = doc.at("r").get<Eigen::Index>();
    const auto scale = doc.at("scale").get<double>();
    const auto& rows = doc.at("factors");
    const auto& mask = doc.at("zero_mask");
    if (!rows.is_array() || !mask.is_array() || static_cast<Eigen::Index>(rows.size()) != r ||
        static_cast<Eigen::Index>(mask.size()) != r) {
      throw ParseError("embedding JSON: factors and zero_mask must have r entries", 0);
    }
    std::vector<RankOneFactor> factors;
    factors.reserve(static_cast<std::size_t>(r));
    for (Eigen::Index t = 0; t < r; ++t) {
      const auto& row = rows[static_cast<std::size_t>(t)];
      if (static_cast<Eigen::Index>(row.size()) != n) {
        throw ParseError("embedding JSON: factor " + std::to_string(t) + " has wrong length", 0);
      }
      if (mask[static_cast<std::size_t>(t)].get<bool>()) {
        factors.push_back(RankOneFactor::zero(static_cast<int>(t + 1)));
        continue;
      }
      Eigen::VectorXd u(n);
      for (Eigen::Index i = 0; i < n; ++i) u[i] = row[static_cast<std::size_t>(i)].get<double>();
      factors.push_back({std::move(u), static_cast<int>(t + 1)});
    }
    return LearnedEmbedding(n, std::move(factors), scale, doc.value("label", std::string{}));
  } catch (const json::exception& e) {
    throw ParseError(std::string("embedding JSON: ") + e.what(), 0);
  }
}

void save_embedding(const LearnedEmbedding& embedding, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing", path.string());
  out << embedding_to_json(embedding) << '\n';
  out.flush();
  if (!out) throw IoError("write failure", path.string());
}

LearnedEmbedding load_embedding(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embedding", path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return embedding_from_json(buffer.str());
}

}  // namespace amuse
