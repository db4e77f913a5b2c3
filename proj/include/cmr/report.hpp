#pragma once

#include "cmr/manifold.hpp"
#include "cmr/verify.hpp"

#include <json.hpp>

#include <optional>

namespace cmr {

inline constexpr int kReportSchema = 1;

/// Graded-lex term list, each term {"coeff": "num/den", "x": [..], "y": [..], "eps": [..]}.
nlohmann::json terms_to_json(const Polynomial& p);

/// Reads a term list. The layout is taken from dims when given, otherwise
/// from the first term (an empty list then needs dims). Throws ValidationError.
Polynomial terms_from_json(const nlohmann::json& terms, std::optional<Layout> dims = std::nullopt);

nlohmann::json spec_to_json(const OrderSpec& spec);
OrderSpec spec_from_json(const nlohmann::json& j);

nlohmann::json target_to_json(const OrderTarget& target);

/// Polynomial as both the human string and the term list.
nlohmann::json polynomial_to_json(const Polynomial& p, const VariableLayout& names);

nlohmann::json certificate_to_json(const OrderCertificate& cert, const VariableLayout& names);
nlohmann::json spectrum_to_json(const SpectrumReport& report);
nlohmann::json manifold_to_json(const ManifoldApprox& approx, const VariableLayout& names);
nlohmann::json model_to_json(const ReducedModel& model, const VariableLayout& names);
nlohmann::json trajectory_to_json(const TrajectoryReport& report);

/// Rounds to 12 significant digits so reports are stable across platforms.
double fixed_precision(double v);

}  // namespace cmr
