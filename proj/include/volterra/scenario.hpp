#pragma once

// Scenario files: a system, a forcing, an initial vector, a horizon and
// tolerance overrides, stored as JSON with complex numbers written [re, im].
// Bulk series go to CSV with one row per index n.

#include "volterra/aap.hpp"
#include "volterra/model.hpp"
#include "volterra/seqspec.hpp"
#include "volterra/spectral.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

namespace volterra {

using Json = nlohmann::ordered_json;

/// A scenario or CSV file does not match its schema. `field` is a dotted path
/// such as "kernel.terms[1]"; `line` is 0 when it could not be located.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string field, const std::string& message, std::size_t line = 0);
  const std::string& field() const { return field_; }
  std::size_t line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string field_;
  std::string detail_;
  std::size_t line_;
};

struct Scenario {
  std::string name;
  VolterraSystem system;
  Forcing forcing;
  Vector x0;
  std::size_t horizon = 200;
  std::map<std::string, double> tolerances;
  std::map<std::string, std::string> outputs;
};

/// Keys accepted in the "tolerances" block.
const std::vector<std::string>& tolerance_keys();

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);
Json to_json(const Scenario& scenario);
std::string dump_scenario(const Scenario& scenario);

bool operator==(const Scenario& a, const Scenario& b);

Json complex_json(cplx z);
Json vector_json(const Eigen::Ref<const Vector>& v);
Json matrix_json(const Eigen::Ref<const Matrix>& m);
Json kernel_json(const Kernel& kernel);
Json forcing_json(const Forcing& forcing);
Json system_json(const VolterraSystem& system);

/// Tolerance overrides applied on top of the defaults.
SpectralTolerances spectral_tolerances(const std::map<std::string, double>& tol);
ClassifyOptions classify_options(const std::map<std::string, double>& tol, std::size_t horizon);
SpectrumOptions spectrum_options(const std::map<std::string, double>& tol);
ZSpectrumOptions z_spectrum_options(const std::map<std::string, double>& tol);
AapOptions aap_options(const std::map<std::string, double>& tol);
FrequencyOptions frequency_options(const std::map<std::string, double>& tol);
double c0_tolerance(const std::map<std::string, double>& tol);

/// Header "n,re_0,im_0,..." for vectors, "n,re_i_j,im_i_j,..." for matrices.
void write_sequence_csv(std::ostream& out, const Sequence& x);
/// Reads a vector sequence written by write_sequence_csv. Throws SchemaError.
Sequence read_sequence_csv(std::istream& in);

/// Shortest round-trip decimal form ("%.17g").
std::string format_double(double v);

}  // namespace volterra
