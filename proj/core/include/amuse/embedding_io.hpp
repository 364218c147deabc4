#pragma once

#include <filesystem>
#include <string>

#include "amuse/embedding.hpp"

namespace amuse {

/// JSON document {n, r, scale, trace_budget, label, factors, zero_mask}.
/// Zero factors are written as n zeros with zero_mask true. Rows of Phi are
/// sqrt(scale / r) * factors[t].
std::string embedding_to_json(const LearnedEmbedding& embedding);
LearnedEmbedding embedding_from_json(const std::string& text);

void save_embedding(const LearnedEmbedding& embedding, const std::filesystem::path& path);
LearnedEmbedding load_embedding(const std::filesystem::path& path);

}  // namespace amuse
