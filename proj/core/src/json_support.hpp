#pragma once

// Private JSON glue shared by the persistence code; not installed.

#include <json.hpp>

#include "dbff/featsel.hpp"

namespace dbff::detail {

nlohmann::ordered_json selector_json(const FeatureSelector& sel);
FeatureSelector selector_from(const nlohmann::ordered_json& j);

}  // namespace dbff::detail
