#include "volterra/report.hpp"

namespace volterra {

namespace {

Json doubles(const std::vector<double>& v) {
  Json out = Json::array();
  for (const double x : v) out.push_back(x);
  return out;
}

}  // namespace

Json to_json(const SingularSet& sigma) {
  Json points = Json::array();
  for (const auto& p : sigma.points) points.push_back({{"angle", p.angle}, {"residual", p.residual}, {"radius", p.radius}});
  Json roots = Json::array();
  for (const cplx z : sigma.roots) roots.push_back(complex_json(z));
  Json warnings = Json::array();
  for (const auto& w : sigma.warnings) warnings.push_back(w);
  return {{"method", to_string(sigma.method)}, {"points", points}, {"roots", roots}, {"warnings", warnings}};
}

Json to_json(const RayLimitEstimate& estimate) {
  Json samples = Json::array();
  for (const auto& s : estimate.samples) samples.push_back({{"s", s.s}, {"estimate", s.estimate}});
  return {{"angle", estimate.angle}, {"limit", estimate.limit}, {"passed", estimate.passed}, {"samples", samples}};
}

Json to_json(const ClassificationReport& report) {
  const auto& b = report.boundedness;
  Json evidence = {{"bounded", b.bounded}, {"sup_norm", b.sup_norm}, {"slope", b.slope}, {"overflow_step", nullptr}};
  if (b.overflow_step) evidence["overflow_step"] = *b.overflow_step;
  Json abel = Json::array();
  for (const auto& a : report.abel) abel.push_back(to_json(a));
  return {{"verdict", to_string(report.verdict)},
          {"sigma", to_json(report.sigma)},
          {"sigma_empty", report.sigma_empty},
          {"sigma_subset_one", report.sigma_subset_one},
          {"boundedness", evidence},
          {"abel", abel},
          {"kt_tail_difference", report.kt_tail_difference},
          {"kt_difference_convergent", report.kt_difference_convergent}};
}

Json to_json(const SpectrumEstimate& estimate) { return {{"detected", doubles(estimate.detected)}}; }

Json to_json(const C0Result& result) { return {{"passed", result.passed}, {"profile", doubles(result.profile)}}; }

Json to_json(const AAPDecomposition& decomposition) {
  Json coefficients = Json::array();
  for (const auto& c : decomposition.coefficients) coefficients.push_back(matrix_json(c));
  return {{"frequencies", doubles(decomposition.frequencies)},
          {"coefficients", coefficients},
          {"remainder_profile", doubles(decomposition.remainder_profile)},
          {"is_aap", decomposition.is_aap}};
}

}  // namespace volterra
