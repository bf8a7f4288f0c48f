#pragma once

#include <string>

#include <json.hpp>

#include "constellation/form.hpp"

namespace constellation {

/// {"N": int, "terms": [{"indices": [...], "re": x, "im": y}]}, terms in
/// lexicographic order of their index lists.
nlohmann::json form_to_json(const Form& f);
Form form_from_json(const nlohmann::json& j);

std::string form_to_string(const Form& f);

}  // namespace constellation
