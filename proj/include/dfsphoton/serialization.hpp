#pragma once

// JSON forms of the library's result types. Every field is named after the
// quantity it carries; rates are in units of Gamma_1D.

#include <json.hpp>

#include "dfsphoton/analytics.hpp"
#include "dfsphoton/photonics.hpp"
#include "dfsphoton/protocol.hpp"
#include "dfsphoton/pulse.hpp"

namespace dfsphoton {

using Json = nlohmann::ordered_json;

Json complex_to_json(Complex z);
/// Accepts a number or a [re, im] pair.
Complex complex_from_json(const Json& j);

Json to_json(const PulseSegment& segment);
Json to_json(const PulseSequence& sequence);
PulseSequence sequence_from_json(const Json& j);

Json to_json(const PhysicalParams& params);
Json to_json(const TargetSuperposition& target);
Json to_json(const ErrorBudget& budget);
Json to_json(const TotalInfidelities& totals);
Json to_json(const WaveguideSpec& spec);
Json to_json(const PurcellReport& report);
Json to_json(const PropagationReport& report);
/// Summary without the state snapshots.
Json to_json(const SimulationResult& result);

}  // namespace dfsphoton
