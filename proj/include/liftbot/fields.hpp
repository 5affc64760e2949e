#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace liftbot {

// Structured payload of a trace record, in canonical key order.
using Scalar = std::variant<bool, double, std::string>;
using Fields = std::vector<std::pair<std::string, Scalar>>;

}  // namespace liftbot
