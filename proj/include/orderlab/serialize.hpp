#pragma once

#include <string>

#include "json.hpp"
#include "orderlab/entropy.hpp"
#include "orderlab/folner.hpp"
#include "orderlab/group.hpp"
#include "orderlab/order.hpp"
#include "orderlab/pairs.hpp"
#include "orderlab/shift.hpp"

namespace orderlab {

/// JSON views of the report types. Each carries a "kind" discriminator;
/// nlohmann objects keep their keys sorted, so rendering is deterministic.
/// Rationals are emitted as exact "p/q" strings, big counts as decimal
/// strings, group elements as {"group": name, "coords": [...]}. Reports
/// carry no timestamps, hostnames or paths: equal inputs render to equal
/// bytes.
nlohmann::json json_of(const GroupId& group);
nlohmann::json json_of(const GroupElement& g);
nlohmann::json json_of(const ConjugationViolation& v);
nlohmann::json json_of(const PastAxiomReport& rep);
nlohmann::json json_of(const AdmissibilityReport& rep);
nlohmann::json json_of(const FolnerDefectSeries& series);
nlohmann::json json_of(const EntropyEstimate& est);
nlohmann::json json_of(const PinskerCheckReport& rep);
nlohmann::json json_of(const AsymptoticCheckReport& rep);
nlohmann::json json_of(const PairWitness& w);
nlohmann::json json_of(const LiYorkeReport& rep);
nlohmann::json json_of(const ChaoticSample& sample); // reports, not the cells

/// Final document: wraps an object body with schema_version "1" and renders
/// it with 2-space indentation and a trailing newline.
std::string render_report(nlohmann::json body);

/// Defect series as CSV: header n,numerator,denominator,value then one row
/// per window index; value is the defect as %.17g.
std::string to_csv(const FolnerDefectSeries& series);

} // namespace orderlab
