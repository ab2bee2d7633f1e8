#pragma once

#include <initializer_list>
#include <string>

#include <json.hpp>

#include "nltrefftz/kernels.hpp"
#include "nltrefftz/nlconv.hpp"
#include "nltrefftz/polynomial.hpp"
#include "nltrefftz/trefftz.hpp"

namespace nltrefftz {

using json = nlohmann::json;

/// Throws ConfigError if `j` is not an object or has a key outside `allowed`.
void require_known_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where);

json to_json(Point p);
Point point_from_json(const json& j);
json to_json(const Box& b);
Box box_from_json(const json& j);
json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const json& j);
json to_json(const Kernel& k);
Kernel kernel_from_json(const json& j);
json to_json(const ConvDomain& d);
ConvDomain conv_domain_from_json(const json& j);
json to_json(const ConvConfig& c);
ConvConfig conv_config_from_json(const json& j);

/// Self-describing document: basis metadata and ordering, coefficient rows,
/// configuration snapshot and residuals. Doubles round-trip exactly.
json to_json(const TrefftzSet& ts);
TrefftzSet trefftz_set_from_json(const json& j);

}  // namespace nltrefftz
