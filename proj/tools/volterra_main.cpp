#include "volterra/acceptance.hpp"
#include "volterra/gallery.hpp"
#include "volterra/report.hpp"
#include "volterra/solver.hpp"
#include "volterra/ztransform.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace volterra;

namespace {

/// Bad command-line input; exits with status 2 like a schema error.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config;
  std::string out = ".";
  bool out_given = false;
  std::optional<std::size_t> n_steps;
  std::optional<std::size_t> grid;
  std::vector<std::string> tol;
  bool fast = false;
  std::uint64_t seed = kDefaultSeed;
  std::string input;
  std::string z;
  std::string selector = "all";
};

Scenario load(const Options& o) {
  if (o.config.empty()) throw UsageError("--config is required");
  Scenario s = load_scenario(o.config);
  if (o.n_steps) s.horizon = *o.n_steps;
  if (o.grid) s.tolerances["grid"] = static_cast<double>(*o.grid);
  for (const auto& kv : o.tol) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--tol expects KEY=VAL, got \"" + kv + "\"");
    const std::string key = kv.substr(0, eq);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(kv.substr(eq + 1), &used);
      if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
    } catch (const std::exception&) {
      throw SchemaError("tolerances." + key, "not a number: \"" + kv.substr(eq + 1) + "\"");
    }
    s.tolerances[key] = value;
  }
  // Re-parse so overrides go through the same validation as the file.
  return parse_scenario(dump_scenario(s));
}

fs::path output_path(const Options& o, const Scenario* s, const std::string& key, const std::string& fallback) {
  fs::create_directories(o.out);
  if (s) {
    const auto it = s->outputs.find(key);
    if (it != s->outputs.end()) return fs::path(o.out) / it->second;
  }
  return fs::path(o.out) / fallback;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  std::cout << "wrote " << path.string() << "\n";
}

void write_json(const fs::path& path, const Json& j) { write_file(path, j.dump(2) + "\n"); }

void write_csv(const fs::path& path, const Sequence& x) {
  std::ostringstream s;
  write_sequence_csv(s, x);
  write_file(path, s.str());
}

Sequence trajectory(const Scenario& s, const Options& o) {
  return o.fast ? solve_fast(s.system, s.forcing, s.x0, s.horizon) : solve(s.system, s.forcing, s.x0, s.horizon);
}

/// From --input if given, otherwise the scenario's trajectory, lengthened to
/// at least `min_length` values unless --n-steps fixes the horizon.
Sequence input_sequence(const Options& o, std::size_t min_length) {
  if (!o.input.empty()) {
    std::ifstream f(o.input);
    if (!f) throw UsageError("cannot read " + o.input);
    return read_sequence_csv(f);
  }
  Scenario s = load(o);
  if (!o.n_steps && min_length > 0) s.horizon = std::max(s.horizon, min_length - 1);
  Options fast = o;
  fast.fast = o.fast || s.horizon > 4096;
  return trajectory(s, fast);
}

std::map<std::string, double> tolerances_for_input(const Options& o) {
  if (!o.config.empty()) return load(o).tolerances;
  std::map<std::string, double> tol;
  if (o.grid) tol["grid"] = static_cast<double>(*o.grid);
  for (const auto& kv : o.tol) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--tol expects KEY=VAL, got \"" + kv + "\"");
    const auto& keys = tolerance_keys();
    const std::string key = kv.substr(0, eq);
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw SchemaError("tolerances." + key, "unknown tolerance key");
    tol[key] = std::stod(kv.substr(eq + 1));
  }
  return tol;
}

int cmd_simulate(const Options& o) {
  const Scenario s = load(o);
  const auto x = trajectory(s, o);
  write_csv(output_path(o, &s, "csv", "trajectory.csv"), x);
  write_json(output_path(o, &s, "json", "trajectory.json"),
             {{"scenario", s.name},
              {"solver", o.fast ? "fast" : "direct"},
              {"steps", s.horizon},
              {"sup_norm", x.sup_norm()},
              {"final", vector_json(Vector(x[x.size() - 1]))}});
  return 0;
}

int cmd_resolvent(const Options& o) {
  const Scenario s = load(o);
  const auto X = o.fast ? resolvent_fast(s.system, s.horizon) : resolvent(s.system, s.horizon);
  write_csv(output_path(o, &s, "resolvent_csv", "resolvent.csv"), X);
  write_json(output_path(o, &s, "resolvent_json", "resolvent.json"),
             {{"scenario", s.name},
              {"steps", s.horizon},
              {"sup_norm", X.sup_norm()},
              {"final_difference", s.horizon > 0 ? operator_norm(X[s.horizon] - X[s.horizon - 1]) : 0.0}});
  return 0;
}

int cmd_spectrum(const Options& o) {
  const Scenario s = load(o);
  const auto tol = spectral_tolerances(s.tolerances);
  const auto sigma = find_sigma(s.system, tol);
  const auto scan = scan_circle(s.system, tol.grid);
  std::ostringstream csv;
  csv << "theta,sigma_min\n";
  for (const auto& p : scan) csv << format_double(p.angle) << "," << format_double(p.sigma_min) << "\n";
  write_json(output_path(o, &s, "sigma_json", "sigma.json"), to_json(sigma));
  write_file(output_path(o, &s, "sigma_csv", "sigma_min.csv"), csv.str());
  std::cout << "Σ: " << sigma.points.size() << " point(s)";
  for (const auto& p : sigma.points) std::cout << " " << format_double(p.angle);
  std::cout << "\n";
  return 0;
}

int cmd_classify(const Options& o) {
  const Scenario s = load(o);
  const auto report = classify(s.system, classify_options(s.tolerances, o.n_steps.value_or(ClassifyOptions{}.horizon)));
  write_json(output_path(o, &s, "classify_json", "classify.json"), to_json(report));
  std::cout << "verdict: " << to_string(report.verdict) << "\n";
  if (report.boundedness.overflow_step) throw OverflowError(*report.boundedness.overflow_step);
  return 0;
}

cplx parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(text), 0.0};
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw UsageError("--z expects RE,IM, got \"" + text + "\"");
  }
}

int cmd_zt(const Options& o) {
  if (o.z.empty()) throw UsageError("--z is required");
  const Scenario s = load(o);
  const cplx z = parse_complex(o.z);
  Json out = {{"z", complex_json(z)}};
  try {
    const auto k = zt_kernel(s.system.kernel(), z);
    out["kernel"] = {{"value", matrix_json(k.value)}, {"truncation_bound", k.truncation_bound}};
  } catch (const DomainError& e) {
    out["kernel"] = {{"error", e.what()}};
  }
  if (std::abs(z) > 1.0) {
    const auto x = trajectory(s, o);
    const auto v = zt_sequence(x, z);
    out["trajectory"] = {{"terms", x.size()}, {"value", matrix_json(v.value)}, {"truncation_bound", v.truncation_bound}};
  } else {
    out["trajectory"] = {{"error", "tabulated trajectories are only transformed for |z| > 1"}};
  }
  std::cout << out.dump(2) << "\n";
  write_json(output_path(o, &s, "zt_json", "zt.json"), out);
  return 0;
}

int cmd_seqspec(const Options& o) {
  const auto tol = tolerances_for_input(o);
  const auto options = spectrum_options(tol);
  const auto x = input_sequence(o, required_length(options));
  const auto spec = estimate_spectrum(x, options);
  const auto zspec = estimate_z_spectrum(x, z_spectrum_options(tol));
  std::ostringstream csv;
  csv << "theta,gamma\n";
  for (std::size_t i = 0; i < spec.angles.size(); ++i)
    csv << format_double(spec.angles[i]) << "," << format_double(spec.scores[i]) << "\n";
  write_file(fs::path(o.out) / "seqspec.csv", csv.str());
  Json z = Json::array();
  for (const double a : zspec.detected) z.push_back(a);
  Json j = to_json(spec);
  j["length"] = x.size();
  j["z_detected"] = z;
  write_json(fs::path(o.out) / "seqspec.json", j);
  std::cout << "detected " << spec.detected.size() << " angle(s), Z-spectrum " << zspec.detected.size() << "\n";
  return 0;
}

int cmd_classify_trajectory(const Options& o) {
  const auto tol = tolerances_for_input(o);
  const auto x = input_sequence(o, 0);
  const auto freqs = detect_frequencies(x, frequency_options(tol));
  const auto dec = aap_decompose(x, freqs, aap_options(tol));
  const auto c0 = c0_test(x, c0_tolerance(tol), aap_options(tol).windows);
  Json j = to_json(dec);
  j["c0"] = to_json(c0);
  j["length"] = x.size();
  write_json(fs::path(o.out) / "aap.json", j);
  std::cout << "c0: " << (c0.passed ? "yes" : "no") << ", AAP: " << (dec.is_aap ? "yes" : "no") << ", "
            << freqs.size() << " frequency(ies)\n";
  return 0;
}

int cmd_verify(const Options& o) {
  if (!is_acceptance_selector(o.selector)) throw UsageError("unknown verification selector \"" + o.selector + "\"");
  const auto report = run_acceptance(o.selector, o.seed);
  for (const auto& c : report.criteria) std::cout << summary_line(c) << "\n";
  if (o.out_given) write_json(fs::path(o.out) / "verify.json", to_json(report));
  std::cout << (report.passed() ? "all selected criteria passed" : "some criteria failed") << "\n";
  return report.passed() ? 0 : 1;
}

int cmd_bench(const Options& o) {
  Scenario s = o.config.empty()
                   ? gallery_scenario(gallery().back(), gallery().back().harmonic, 4096)
                   : load(o);
  const std::size_t top = o.n_steps.value_or(std::max<std::size_t>(s.horizon, 4096));
  std::ostringstream table;
  table << "N,naive_s,fast_s,ratio,max_diff\n";
  std::printf("%8s %12s %12s %8s %12s\n", "N", "naive [s]", "fast [s]", "ratio", "max diff");
  for (std::size_t n = 256; n <= top; n *= 2) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const auto slow = solve(s.system, s.forcing, s.x0, n);
    const auto t1 = clock::now();
    const auto fast = solve_fast(s.system, s.forcing, s.x0, n);
    const auto t2 = clock::now();
    const double a = std::chrono::duration<double>(t1 - t0).count();
    const double b = std::chrono::duration<double>(t2 - t1).count();
    double diff = 0.0;
    for (std::size_t k = 0; k <= n; ++k) diff = std::max(diff, operator_norm(slow[k] - fast[k]));
    std::printf("%8zu %12.4g %12.4g %8.3g %12.3g\n", n, a, b, a / b, diff);
    table << n << "," << format_double(a) << "," << format_double(b) << "," << format_double(a / b) << ","
          << format_double(diff) << "\n";
  }
  if (o.out_given) write_file(fs::path(o.out) / "bench.csv", table.str());
  return 0;
}

int cmd_gallery(const Options& o) {
  if (!o.out_given) throw UsageError("--out is required");
  for (const auto& g : gallery()) {
    const std::pair<const char*, Forcing> variants[] = {
        {"decaying", g.decaying}, {"harmonic", g.harmonic}, {"constant", unit_constant_forcing(g.system.dim())}};
    for (const auto& [tag, forcing] : variants) {
      Scenario s = gallery_scenario(g, forcing, 2000);
      s.name = g.name + "-" + tag;
      write_file(fs::path(o.out) / (s.name + ".json"), dump_scenario(s));
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate and analyse linear Volterra difference equations of convolution type"};
  app.require_subcommand(1);
  Options o;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "scenario JSON file");
    sub->add_option("--out", o.out, "output directory")->each([&](const std::string&) { o.out_given = true; });
    sub->add_option("--n-steps", o.n_steps, "horizon N, overrides the scenario");
    sub->add_option("--grid", o.grid, "angular grid size");
    sub->add_option("--tol", o.tol, "tolerance override KEY=VAL")->take_all()->allow_extra_args(false);
    sub->add_flag("--fast", o.fast, "use the FFT online-convolution solver");
    sub->add_option("--seed", o.seed, "seed for randomized checks");
    return sub;
  };

  std::map<CLI::App*, std::function<int(const Options&)>> handlers;
  const auto add = [&](const std::string& name, const std::string& help, std::function<int(const Options&)> f) {
    auto* sub = common(app.add_subcommand(name, help));
    handlers[sub] = std::move(f);
    return sub;
  };

  add("simulate", "solve the scenario and write the trajectory", cmd_simulate);
  add("resolvent", "compute X(0..N) for the scenario's system", cmd_resolvent);
  add("spectrum", "singular set Σ on the unit circle and the σ_min profile", cmd_spectrum);
  add("classify", "stability verdict for the scenario's system", cmd_classify);
  add("zt", "Z-transforms of the kernel and trajectory at one point", cmd_zt)->add_option("--z", o.z, "RE,IM");
  add("seqspec", "spectrum estimate of a trajectory or CSV sequence", cmd_seqspec)
      ->add_option("--input", o.input, "sequence CSV");
  add("classify-trajectory", "decay and almost periodicity of a trajectory", cmd_classify_trajectory)
      ->add_option("--input", o.input, "sequence CSV");
  add("verify", "run the acceptance suite", cmd_verify)->add_option("selector", o.selector, "all, a key, or 1..10");
  add("bench", "naive versus fast solver timing table", cmd_bench);
  add("gallery", "export the built-in gallery scenarios", cmd_gallery);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    for (auto* sub : app.get_subcommands()) return handlers.at(sub)(o);
  } catch (const SchemaError& e) {
    std::cerr << "schema error";
    if (e.line() > 0) std::cerr << " at line " << e.line();
    if (!e.field().empty()) std::cerr << " in field " << e.field();
    std::cerr << ": " << e.detail() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const OverflowError& e) {
    std::cerr << "overflow: state became non-finite at step " << e.step() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
