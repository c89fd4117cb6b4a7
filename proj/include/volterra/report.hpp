#pragma once

// JSON views of analysis results, as written by the command-line tool.

#include "volterra/aap.hpp"
#include "volterra/scenario.hpp"
#include "volterra/seqspec.hpp"
#include "volterra/spectral.hpp"

namespace volterra {

Json to_json(const SingularSet& sigma);
Json to_json(const RayLimitEstimate& estimate);
Json to_json(const ClassificationReport& report);
Json to_json(const SpectrumEstimate& estimate);
Json to_json(const C0Result& result);
Json to_json(const AAPDecomposition& decomposition);

}  // namespace volterra
