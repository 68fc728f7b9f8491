#pragma once

#include <json.hpp>

#include "srgraph/symbol_graph.hpp"

namespace srgraph::detail {

nlohmann::json spec_to_json(const SymbolGraphSpec& spec);
SymbolGraphSpec spec_from_json(const nlohmann::json& doc);

}  // namespace srgraph::detail
