#pragma once

// JSON forms of certificates, check outcomes and decomposition results.
// Every number is written as an ExactReal literal or a rational string.

#include <json.hpp>

#include "ngd/analysis.hpp"
#include "ngd/decompose.hpp"
#include "ngd/extension.hpp"

namespace ngd {

nlohmann::json to_json(const Enclosure& e);
Enclosure enclosure_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const ViolationCertificate& cert);
ViolationCertificate certificate_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const CheckResult& result);
nlohmann::json to_json(const TransferReport& report);
nlohmann::json to_json(const VerificationReport& report);
nlohmann::json to_json(const UniquenessReport& report);

nlohmann::json to_json(const DecompositionResult& result);
DecompositionResult decomposition_from_json(const nlohmann::json& doc);

}  // namespace ngd
