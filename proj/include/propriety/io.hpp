#pragma once
#include "propriety/engine.hpp"
#include "propriety/glm.hpp"
#include "propriety/model.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace propriety {

/// Model document: {"family","link","y","m","X","Z","blocks":[{"q","a","b"}]}
/// with matrices as row-major arrays of arrays and numeric entries given as
/// JSON numbers or decimal strings; either way they are held exactly.
GlmmModel model_from_json(const nlohmann::json& doc);
GlmmModel model_from_json_file(const std::string& path);

/// Spreadsheet route: design matrices as CSV (one row per line, comma or
/// whitespace separated decimal entries), responses and trial counts as
/// one-column CSV files.
GlmmModel model_from_csv(const std::string& x_path, const std::string& z_path,
                         const std::string& y_path, const std::string& m_path,
                         FamilyKind family, const Link& link,
                         const std::vector<PriorBlock>& blocks);

nlohmann::ordered_json verdict_to_json(const Verdict& verdict);
std::string verdict_to_text(const Verdict& verdict);

nlohmann::ordered_json fit_to_json(const GlmFit& fit);

} // namespace propriety
