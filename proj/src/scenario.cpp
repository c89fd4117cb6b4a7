#include "volterra/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace volterra {

SchemaError::SchemaError(std::string field, const std::string& message, std::size_t line)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (field.empty() ? std::string() : field + ": ") + message),
      field_(std::move(field)),
      detail_(message),
      line_(line) {}

namespace {

using In = nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void fail(const std::string& field, const std::string& message) { throw SchemaError(field, message); }

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }
std::string dot(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void require_object(const In& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object");
}

void require_array(const In& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array");
}

void allow_keys(const In& obj, const std::string& path, std::initializer_list<const char*> keys) {
  for (const auto& [k, _] : obj.items())
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; }))
      fail(dot(path, k), "unknown field");
}

const In& member(const In& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(dot(path, key), "missing required field");
  return *it;
}

double number(const In& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "expected a finite number");
  return x;
}

std::size_t count(const In& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 0) fail(path, "expected a non-negative integer");
  return v.get<std::size_t>();
}

std::string text(const In& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

cplx complex_value(const In& v, const std::string& path) {
  if (v.is_number()) return {number(v, path), 0.0};
  if (!v.is_array() || v.size() != 2) fail(path, "expected a complex number [re, im]");
  return {number(v[0], at(path, 0)), number(v[1], at(path, 1))};
}

Vector vector_value(const In& v, const std::string& path, Index dim) {
  require_array(v, path);
  if (static_cast<Index>(v.size()) != dim)
    fail(path, "expected " + std::to_string(dim) + " entries, got " + std::to_string(v.size()));
  Vector out(dim);
  for (Index i = 0; i < dim; ++i) out(i) = complex_value(v[static_cast<std::size_t>(i)], at(path, static_cast<std::size_t>(i)));
  return out;
}

Matrix matrix_value(const In& v, const std::string& path, Index dim) {
  require_array(v, path);
  if (static_cast<Index>(v.size()) != dim)
    fail(path, "expected " + std::to_string(dim) + " rows, got " + std::to_string(v.size()));
  Matrix out(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    const auto row = at(path, static_cast<std::size_t>(i));
    const Vector r = vector_value(v[static_cast<std::size_t>(i)], row, dim);
    out.row(i) = r.transpose();
  }
  return out;
}

std::vector<Matrix> matrix_list(const In& v, const std::string& path, Index dim) {
  require_array(v, path);
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(matrix_value(v[i], at(path, i), dim));
  return out;
}

Kernel parse_kernel(const In& v, Index dim) {
  const std::string path = "kernel";
  require_object(v, path);
  const std::string type = text(member(v, "type", path), dot(path, "type"));
  try {
    if (type == "finite") {
      allow_keys(v, path, {"type", "terms"});
      return Kernel(FiniteKernel{dim, matrix_list(member(v, "terms", path), dot(path, "terms"), dim)});
    }
    if (type == "geometric-sum") {
      allow_keys(v, path, {"type", "terms"});
      const In& terms = member(v, "terms", path);
      require_array(terms, dot(path, "terms"));
      GeometricSumKernel k{dim, {}};
      for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto p = at(dot(path, "terms"), i);
        require_object(terms[i], p);
        allow_keys(terms[i], p, {"coefficient", "ratio"});
        const cplx r = complex_value(member(terms[i], "ratio", p), dot(p, "ratio"));
        if (!(std::abs(r) < 1.0)) fail(dot(p, "ratio"), "geometric ratios must lie strictly inside the unit disk");
        k.terms.push_back({matrix_value(member(terms[i], "coefficient", p), dot(p, "coefficient"), dim), r});
      }
      return Kernel(std::move(k));
    }
    if (type == "tabulated") {
      allow_keys(v, path, {"type", "values", "tail_norm_bound"});
      const double tail = number(member(v, "tail_norm_bound", path), dot(path, "tail_norm_bound"));
      if (tail < 0.0) fail(dot(path, "tail_norm_bound"), "the tail bound must be non-negative");
      return Kernel(TabulatedKernel{dim, matrix_list(member(v, "values", path), dot(path, "values"), dim), tail});
    }
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  fail(dot(path, "type"), "unknown kernel type \"" + type + "\" (finite, geometric-sum, tabulated)");
}

Forcing parse_forcing(const In& v, Index dim) {
  const std::string path = "forcing";
  require_object(v, path);
  const std::string type = text(member(v, "type", path), dot(path, "type"));
  if (type == "zero") {
    allow_keys(v, path, {"type"});
    return Forcing::zero(dim);
  }
  if (type == "constant") {
    allow_keys(v, path, {"type", "value"});
    return Forcing(ConstantForcing{vector_value(member(v, "value", path), dot(path, "value"), dim)});
  }
  if (type == "harmonic") {
    allow_keys(v, path, {"type", "modes"});
    const In& modes = member(v, "modes", path);
    require_array(modes, dot(path, "modes"));
    HarmonicForcing h{dim, {}};
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const auto p = at(dot(path, "modes"), i);
      require_object(modes[i], p);
      allow_keys(modes[i], p, {"angle", "amplitude"});
      const double angle = number(member(modes[i], "angle", p), dot(p, "angle"));
      if (angle < 0.0 || angle >= kTwoPi) fail(dot(p, "angle"), "angles must lie in [0, 2π)");
      h.modes.push_back({angle, vector_value(member(modes[i], "amplitude", p), dot(p, "amplitude"), dim)});
    }
    return Forcing(std::move(h));
  }
  if (type == "decaying") {
    allow_keys(v, path, {"type", "profile", "amplitude", "ratio"});
    DecayingForcing f;
    f.amplitude = vector_value(member(v, "amplitude", path), dot(path, "amplitude"), dim);
    const std::string profile = text(member(v, "profile", path), dot(path, "profile"));
    if (profile == "geometric") {
      f.profile = DecayingForcing::Profile::geometric;
      f.ratio = complex_value(member(v, "ratio", path), dot(path, "ratio"));
      if (!(std::abs(f.ratio) < 1.0)) fail(dot(path, "ratio"), "decay ratios must lie strictly inside the unit disk");
    } else if (profile == "inverse") {
      f.profile = DecayingForcing::Profile::inverse;
      if (v.contains("ratio")) f.ratio = complex_value(v["ratio"], dot(path, "ratio"));
    } else {
      fail(dot(path, "profile"), "unknown decay profile \"" + profile + "\" (geometric, inverse)");
    }
    return Forcing(std::move(f));
  }
  if (type == "tabulated") {
    allow_keys(v, path, {"type", "values"});
    const In& values = member(v, "values", path);
    require_array(values, dot(path, "values"));
    TabulatedForcing t{dim, {}};
    for (std::size_t i = 0; i < values.size(); ++i)
      t.values.push_back(vector_value(values[i], at(dot(path, "values"), i), dim));
    return Forcing(std::move(t));
  }
  fail(dot(path, "type"), "unknown forcing type \"" + type + "\" (zero, constant, harmonic, decaying, tabulated)");
}

const std::vector<std::string> kIntegerKeys = {"grid",      "max_degree", "growth_windows", "window_start",
                                                "window_length", "windows", "max_frequencies"};

bool is_integer_key(const std::string& k) {
  return std::find(kIntegerKeys.begin(), kIntegerKeys.end(), k) != kIntegerKeys.end();
}

/// Line of the last key of a dotted field path, searching keys in order.
std::size_t locate(const std::string& source, const std::string& field) {
  std::size_t pos = 0;
  bool any = false;
  std::stringstream parts(field);
  std::string part;
  while (std::getline(parts, part, '.')) {
    const std::string key = part.substr(0, part.find('['));
    if (key.empty()) continue;
    const auto hit = source.find("\"" + key + "\"", pos);
    if (hit == std::string::npos) break;
    pos = hit;
    any = true;
  }
  if (!any) return 0;
  return 1 + static_cast<std::size_t>(std::count(source.begin(), source.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

Scenario parse_document(const In& doc) {
  require_object(doc, "");
  allow_keys(doc, "", {"name", "dim", "A", "kernel", "forcing", "x0", "N", "tolerances", "outputs"});
  const std::size_t d = count(member(doc, "dim", ""), "dim");
  if (d < 1) fail("dim", "dimension must be at least 1");
  const auto dim = static_cast<Index>(d);
  Matrix a = matrix_value(member(doc, "A", ""), "A", dim);
  Kernel kernel = parse_kernel(member(doc, "kernel", ""), dim);
  Forcing forcing = doc.contains("forcing") ? parse_forcing(doc["forcing"], dim) : Forcing::zero(dim);
  Vector x0 = Vector::Zero(dim);
  if (doc.contains("x0"))
    x0 = vector_value(doc["x0"], "x0", dim);
  else
    x0(0) = 1.0;
  Scenario s{"", VolterraSystem(std::move(a), std::move(kernel)), std::move(forcing), std::move(x0), 200, {}, {}};
  if (doc.contains("name")) s.name = text(doc["name"], "name");
  if (doc.contains("N")) s.horizon = count(doc["N"], "N");
  if (doc.contains("tolerances")) {
    const In& t = doc["tolerances"];
    require_object(t, "tolerances");
    const auto& keys = tolerance_keys();
    for (const auto& [k, v] : t.items()) {
      const auto p = dot("tolerances", k);
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) fail(p, "unknown tolerance key");
      const double x = number(v, p);
      if (is_integer_key(k) ? !(x >= 1.0 && std::floor(x) == x) : !(x > 0.0))
        fail(p, is_integer_key(k) ? "expected a positive integer" : "expected a positive number");
      s.tolerances[k] = x;
    }
  }
  if (doc.contains("outputs")) {
    const In& o = doc["outputs"];
    require_object(o, "outputs");
    for (const auto& [k, v] : o.items()) s.outputs[k] = text(v, dot("outputs", k));
  }
  return s;
}

double get(const std::map<std::string, double>& tol, const std::string& key, double fallback) {
  const auto it = tol.find(key);
  return it == tol.end() ? fallback : it->second;
}

std::size_t get_count(const std::map<std::string, double>& tol, const std::string& key, std::size_t fallback) {
  const auto it = tol.find(key);
  return it == tol.end() ? fallback : static_cast<std::size_t>(it->second);
}

}  // namespace

const std::vector<std::string>& tolerance_keys() {
  static const std::vector<std::string> keys = {
      "singular_tol",  "root_circle_tol",   "grid",          "cluster_radius",  "max_degree",
      "growth_slope",  "growth_windows",    "abel_tol",      "window_start",    "window_length",
      "window_scale",  "truncation_tol",    "spectrum_threshold", "amplitude_floor", "z_ratio_threshold",
      "aap_tol",       "windows",           "frequency_threshold", "max_frequencies", "c0_tol"};
  return keys;
}

Scenario parse_scenario(const std::string& source) {
  In doc;
  try {
    doc = In::parse(source);
  } catch (const In::parse_error& e) {
    const auto line = 1 + static_cast<std::size_t>(
                              std::count(source.begin(),
                                         source.begin() + static_cast<std::ptrdiff_t>(std::min(e.byte, source.size())), '\n'));
    throw SchemaError("", std::string("malformed JSON: ") + e.what(), line);
  }
  try {
    return parse_document(doc);
  } catch (const SchemaError& e) {
    if (e.line() != 0) throw;
    throw SchemaError(e.field(), e.detail(), locate(source, e.field()));
  } catch (const std::invalid_argument& e) {
    throw SchemaError("", e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("", "cannot open scenario file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json vector_json(const Eigen::Ref<const Vector>& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

Json matrix_json(const Eigen::Ref<const Matrix>& m) {
  Json out = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

Json kernel_json(const Kernel& kernel) {
  return std::visit(overloaded{
                        [](const FiniteKernel& k) {
                          Json terms = Json::array();
                          for (const auto& t : k.terms) terms.push_back(matrix_json(t));
                          return Json{{"type", "finite"}, {"terms", terms}};
                        },
                        [](const GeometricSumKernel& k) {
                          Json terms = Json::array();
                          for (const auto& t : k.terms)
                            terms.push_back(Json{{"coefficient", matrix_json(t.coefficient)},
                                                 {"ratio", complex_json(t.ratio)}});
                          return Json{{"type", "geometric-sum"}, {"terms", terms}};
                        },
                        [](const TabulatedKernel& k) {
                          Json values = Json::array();
                          for (const auto& t : k.values) values.push_back(matrix_json(t));
                          return Json{{"type", "tabulated"}, {"values", values}, {"tail_norm_bound", k.tail_norm_bound}};
                        },
                    },
                    kernel.variant());
}

Json forcing_json(const Forcing& forcing) {
  return std::visit(
      overloaded{
          [](const ZeroForcing&) { return Json{{"type", "zero"}}; },
          [](const ConstantForcing& f) { return Json{{"type", "constant"}, {"value", vector_json(f.value)}}; },
          [](const HarmonicForcing& f) {
            Json modes = Json::array();
            for (const auto& m : f.modes) modes.push_back(Json{{"angle", m.angle}, {"amplitude", vector_json(m.amplitude)}});
            return Json{{"type", "harmonic"}, {"modes", modes}};
          },
          [](const DecayingForcing& f) {
            return Json{{"type", "decaying"},
                        {"profile", f.profile == DecayingForcing::Profile::geometric ? "geometric" : "inverse"},
                        {"amplitude", vector_json(f.amplitude)},
                        {"ratio", complex_json(f.ratio)}};
          },
          [](const TabulatedForcing& f) {
            Json values = Json::array();
            for (const auto& v : f.values) values.push_back(vector_json(v));
            return Json{{"type", "tabulated"}, {"values", values}};
          },
      },
      forcing.variant());
}

Json system_json(const VolterraSystem& system) {
  return Json{{"dim", system.dim()}, {"A", matrix_json(system.a())}, {"kernel", kernel_json(system.kernel())}};
}

Json to_json(const Scenario& s) {
  Json out = Json::object();
  if (!s.name.empty()) out["name"] = s.name;
  out["dim"] = s.system.dim();
  out["A"] = matrix_json(s.system.a());
  out["kernel"] = kernel_json(s.system.kernel());
  out["forcing"] = forcing_json(s.forcing);
  out["x0"] = vector_json(s.x0);
  out["N"] = s.horizon;
  if (!s.tolerances.empty()) {
    Json t = Json::object();
    for (const auto& [k, v] : s.tolerances) t[k] = v;
    out["tolerances"] = t;
  }
  if (!s.outputs.empty()) {
    Json o = Json::object();
    for (const auto& [k, v] : s.outputs) o[k] = v;
    out["outputs"] = o;
  }
  return out;
}

std::string dump_scenario(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

bool operator==(const Scenario& a, const Scenario& b) {
  return a.name == b.name && a.system == b.system && a.forcing == b.forcing && a.x0 == b.x0 &&
         a.horizon == b.horizon && a.tolerances == b.tolerances && a.outputs == b.outputs;
}

SpectralTolerances spectral_tolerances(const std::map<std::string, double>& tol) {
  SpectralTolerances t;
  t.singular_tol = get(tol, "singular_tol", t.singular_tol);
  t.root_circle_tol = get(tol, "root_circle_tol", t.root_circle_tol);
  t.grid = get_count(tol, "grid", t.grid);
  t.cluster_radius = get(tol, "cluster_radius", t.cluster_radius);
  t.max_degree = get_count(tol, "max_degree", t.max_degree);
  return t;
}

ClassifyOptions classify_options(const std::map<std::string, double>& tol, std::size_t horizon) {
  ClassifyOptions o;
  o.horizon = horizon;
  o.spectral = spectral_tolerances(tol);
  o.growth_slope = get(tol, "growth_slope", o.growth_slope);
  o.growth_windows = get_count(tol, "growth_windows", o.growth_windows);
  o.abel_tol = get(tol, "abel_tol", o.abel_tol);
  return o;
}

SpectrumOptions spectrum_options(const std::map<std::string, double>& tol) {
  SpectrumOptions o;
  o.grid = get_count(tol, "grid", o.grid);
  o.window_start = get_count(tol, "window_start", o.window_start);
  o.window_length = get_count(tol, "window_length", o.window_length);
  o.window_scale = get(tol, "window_scale", o.window_scale);
  o.truncation_tol = get(tol, "truncation_tol", o.truncation_tol);
  o.threshold = get(tol, "spectrum_threshold", o.threshold);
  o.amplitude_floor = get(tol, "amplitude_floor", o.amplitude_floor);
  return o;
}

ZSpectrumOptions z_spectrum_options(const std::map<std::string, double>& tol) {
  ZSpectrumOptions o;
  o.grid = get_count(tol, "grid", o.grid);
  o.ratio_threshold = get(tol, "z_ratio_threshold", o.ratio_threshold);
  return o;
}

AapOptions aap_options(const std::map<std::string, double>& tol) {
  AapOptions o;
  o.tol = get(tol, "aap_tol", o.tol);
  o.windows = get_count(tol, "windows", o.windows);
  return o;
}

FrequencyOptions frequency_options(const std::map<std::string, double>& tol) {
  FrequencyOptions o;
  o.threshold = get(tol, "frequency_threshold", o.threshold);
  o.max_frequencies = get_count(tol, "max_frequencies", o.max_frequencies);
  return o;
}

double c0_tolerance(const std::map<std::string, double>& tol) { return get(tol, "c0_tol", 1e-3); }

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_sequence_csv(std::ostream& out, const Sequence& x) {
  out << "n";
  const bool vector = x.cols() == 1;
  for (Index j = 0; j < x.cols(); ++j)
    for (Index i = 0; i < x.rows(); ++i) {
      const std::string tag = vector ? std::to_string(i) : std::to_string(i) + "_" + std::to_string(j);
      out << ",re_" << tag << ",im_" << tag;
    }
  out << "\n";
  for (std::size_t n = 0; n < x.size(); ++n) {
    out << n;
    const auto e = x[n];
    for (Index j = 0; j < x.cols(); ++j)
      for (Index i = 0; i < x.rows(); ++i)
        out << ',' << format_double(e(i, j).real()) << ',' << format_double(e(i, j).imag());
    out << "\n";
  }
}

Sequence read_sequence_csv(std::istream& in) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cell.erase(0, cell.find_first_not_of(" \t\r"));
      cell.erase(cell.find_last_not_of(" \t\r") + 1);
      cells.push_back(cell);
    }
    return cells;
  };
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("header", "empty CSV input", 1);
  const auto header = split(line);
  if (header.empty() || header[0] != "n" || header.size() < 3 || header.size() % 2 == 0)
    throw SchemaError("header", "expected n,re_0,im_0,... columns", 1);
  const std::size_t dim = (header.size() - 1) / 2;
  for (std::size_t k = 0; k < dim; ++k)
    if (header[1 + 2 * k] != "re_" + std::to_string(k) || header[2 + 2 * k] != "im_" + std::to_string(k))
      throw SchemaError("header", "column " + std::to_string(2 + 2 * k) + " should be re_" + std::to_string(k), 1);
  std::vector<Vector> values;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      throw SchemaError("row", "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(cells.size()),
                        lineno);
    auto parse = [&](const std::string& c, const std::string& column) {
      try {
        std::size_t used = 0;
        const double v = std::stod(c, &used);
        if (used != c.size()) throw std::invalid_argument(c);
        return v;
      } catch (const std::exception&) {
        throw SchemaError(column, "not a number: \"" + c + "\"", lineno);
      }
    };
    if (parse(cells[0], "n") != static_cast<double>(values.size()))
      throw SchemaError("n", "rows must be numbered 0, 1, 2, ...", lineno);
    Vector v(static_cast<Index>(dim));
    for (std::size_t k = 0; k < dim; ++k)
      v(static_cast<Index>(k)) = cplx(parse(cells[1 + 2 * k], header[1 + 2 * k]), parse(cells[2 + 2 * k], header[2 + 2 * k]));
    values.push_back(std::move(v));
  }
  if (values.empty()) throw SchemaError("row", "no data rows", lineno);
  return Sequence::from_vectors(values);
}

}  // namespace volterra
