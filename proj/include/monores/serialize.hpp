// Chart-tree JSON documents: a stable schema with tagged step unions and
// rationals as "p/q" strings.
#pragma once

#include <json.hpp>

#include "monores/resolver.hpp"

namespace monores {

struct ChartTreeDoc {
    std::size_t dimension = 0;
    std::vector<std::string> variables;
    std::vector<std::string> functions;  // source texts
    ResolutionConfig config;
    Rat eta_used{1, 4};
    std::unique_ptr<ChartNode> root;
};

nlohmann::json to_json(const ChartTreeDoc& doc);
ChartTreeDoc doc_from_json(const nlohmann::json& j);

ChartTreeDoc make_doc(ResolutionResult&& res, std::vector<std::string> variables,
                      std::vector<std::string> sources);

}  // namespace monores
