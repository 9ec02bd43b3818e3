// vnlab command-line front end. Reports go to stdout as one JSON object per
// line; human-readable summaries go to stderr.
//
// Exit codes: 0 ok, 1 a scan or demo check failed, 2 malformed input,
// 3 a numerical tolerance was not met.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "vnlab/entropy.hpp"
#include "vnlab/errors.hpp"
#include "vnlab/io.hpp"

namespace {

using namespace vnlab;
using io::json;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kInputError = 2;
constexpr int kNumericalError = 3;

struct Globals {
  std::optional<double> tolerance;
  std::string manifest_path;
};

// Inline specs are recorded verbatim; @file specs by the digest of the file contents.
std::string input_digest(const std::string& spec) {
  std::string bytes = spec;
  for (const auto& factor : CLI::detail::split(spec, '*')) {
    if (factor.empty() || factor.front() != '@') continue;
    std::ifstream in(factor.substr(1), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    bytes += '\0' + buf.str();
  }
  return io::digest(bytes);
}

void emit(const json& j, std::ostream& out = std::cout) { out << j.dump() << '\n'; }

void write_manifest(const io::RunManifest& m, const std::string& path) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write manifest '" + path + "'");
  out << io::to_json(m).dump(2) << '\n';
}

std::vector<Index> parse_dims(const std::string& text) {
  std::vector<Index> dims;
  for (const auto& item : CLI::detail::split(text, ',')) {
    if (item.empty()) continue;
    // A range a..b expands inclusively.
    const auto dots = item.find("..");
    try {
      if (dots == std::string::npos) {
        dims.push_back(std::stoll(item));
      } else {
        const Index lo = std::stoll(item.substr(0, dots)), hi = std::stoll(item.substr(dots + 2));
        for (Index d = lo; d <= hi; ++d) dims.push_back(d);
      }
    } catch (const std::logic_error&) {
      throw DomainError("dims: '" + item + "' is not a dimension or range");
    }
  }
  for (Index d : dims)
    if (d < 2) throw DomainError("dims: dimensions must be at least 2");
  return dims;
}

VnAlgebra within_or_join(const std::string& spec, const VnAlgebra& s, const VnAlgebra& t) {
  return spec.empty() ? join(s, t) : io::parse_algebra(spec);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subalgebra information measures, commuting squares and uncertainty relations"};
  app.require_subcommand(1);
  // Global options may also follow the subcommand.
  app.fallthrough();
  app.set_version_flag("--version", io::kVersion);

  Globals globals;
  app.add_option("--tolerance", globals.tolerance, "Override every per-check tolerance");
  app.add_option("--manifest", globals.manifest_path, "Write the run manifest to this path");

  std::function<int(io::RunManifest&)> run;
  io::RunManifest manifest;

  auto seed_option = [](CLI::App* sub, std::uint64_t& seed) {
    sub->add_option("--seed", seed, "Master seed")->envname("VNLAB_SEED");
  };

  // check-square
  std::string s_spec, t_spec, within_spec, state_spec, json_out;
  auto* check = app.add_subcommand("check-square", "Classify a pair of subalgebras as a (co-)commuting square");
  check->add_option("--s", s_spec, "First algebra")->required();
  check->add_option("--t", t_spec, "Second algebra")->required();
  check->add_option("--within", within_spec, "Ambient algebra (default: the join)");
  check->add_option("--json-out", json_out, "Also write the report to this file");
  check->callback([&] {
    run = [&](io::RunManifest& m) {
      const VnAlgebra s = io::parse_algebra(s_spec), t = io::parse_algebra(t_spec);
      const VnAlgebra within = within_or_join(within_spec, s, t);
      const double tol = globals.tolerance.value_or(kSquareTol);
      json report = io::to_json(classify_square(s, t, within, tol));
      report["tolerance"] = tol;
      emit(report);
      if (!json_out.empty()) {
        std::ofstream out(json_out);
        if (!out) throw DomainError("cannot write '" + json_out + "'");
        emit(report, out);
        m.outputs.push_back(json_out);
      }
      return kOk;
    };
  });

  // cmi
  bool certify = false;
  auto* cmi = app.add_subcommand("cmi", "Generalised conditional mutual information of a commuting square");
  cmi->add_option("--s", s_spec)->required();
  cmi->add_option("--t", t_spec)->required();
  cmi->add_option("--within", within_spec, "Ambient algebra (default: the join)");
  cmi->add_option("--state", state_spec)->required();
  cmi->add_flag("--certify", certify, "Also compute the recovery gap");
  cmi->callback([&] {
    run = [&](io::RunManifest&) {
      const VnAlgebra s = io::parse_algebra(s_spec), t = io::parse_algebra(t_spec);
      const VnAlgebra within = within_or_join(within_spec, s, t);
      emit(io::to_json(gen_cmi(s, t, within, io::parse_state(state_spec), globals.tolerance.value_or(kSquareTol),
                               certify)));
      return kOk;
    };
  });

  // entropy
  std::string algebra_spec, sigma_spec;
  double alpha = 1.0;
  int entropy_restarts = 16;
  std::uint64_t entropy_seed = 0;
  auto* ent = app.add_subcommand("entropy", "Entropies of a state, optionally restricted to a subalgebra");
  ent->add_option("--state", state_spec)->required();
  ent->add_option("--algebra", algebra_spec, "Report H(N) and the α-asymmetry for this subalgebra");
  ent->add_option("--sigma", sigma_spec, "Report the sandwiched divergence against this state");
  ent->add_option("--alpha", alpha, "Rényi order, at least 1/2")->check(CLI::Range(0.5, 1e300));
  ent->add_option("--restarts", entropy_restarts)->check(CLI::PositiveNumber);
  seed_option(ent, entropy_seed);
  ent->callback([&] {
    run = [&](io::RunManifest&) {
      const cmat rho = io::parse_state(state_spec);
      auto bits = [](const EntropyValue& v) { return v.is_finite() ? json(v.bits()) : json("inf"); };
      json report{{"schema", io::kSchema}, {"kind", "entropy"}, {"dim", rho.rows()}, {"vn_bits", bits(vn_entropy(rho))}};
      if (!algebra_spec.empty()) {
        const VnAlgebra n = io::parse_algebra(algebra_spec);
        const auto est = asymmetry_estimate(n, rho, alpha, entropy_restarts, entropy_seed);
        report["algebra_bits"] = bits(algebra_entropy(n, rho));
        report["alpha"] = alpha;
        report["asymmetry_bits"] = bits(est.value);
        report["asymmetry_exactness"] = est.exact ? "exact" : "upper_bound";
        report["restarts"] = est.restarts;
        report["seed"] = est.seed;
      }
      if (!sigma_spec.empty()) {
        report["alpha"] = alpha;
        report["divergence_bits"] = bits(sandwiched_renyi(rho, io::parse_state(sigma_spec), alpha));
      }
      emit(report);
      return kOk;
    };
  });

  // ucr
  std::string relation, x_spec, z_spec;
  Index a_dim = 0, b_dim = 1, c_dim = 1;
  auto* ucr = app.add_subcommand("ucr", "Uncertainty relations as generalised mutual information");
  ucr->add_option("--relation", relation)
      ->required()
      ->check(CLI::IsMember({"memory", "memory-general", "coherence", "maassen-uffink"}));
  ucr->add_option("--state", state_spec)->required();
  ucr->add_option("--x", x_spec, "First basis (memory, coherence)");
  ucr->add_option("--z", z_spec, "Second basis (memory, coherence)");
  ucr->add_option("--d", a_dim, "Dimension of the measured factor (memory)");
  ucr->add_option("--s", s_spec, "First algebra on A (maassen-uffink)");
  ucr->add_option("--t", t_spec, "Second algebra on A (maassen-uffink)");
  ucr->add_option("--b-dim", b_dim)->check(CLI::PositiveNumber);
  ucr->add_option("--c-dim", c_dim)->check(CLI::PositiveNumber);
  ucr->callback([&] {
    run = [&](io::RunManifest&) {
      const cmat rho = io::parse_state(state_spec);
      auto need = [](const std::string& v, const char* flag) {
        if (v.empty()) throw DomainError(std::string("ucr: ") + flag + " is required for this relation");
      };
      UcrReport report;
      if (relation == "maassen-uffink") {
        need(s_spec, "--s");
        need(t_spec, "--t");
        report = maassen_uffink_general(io::parse_algebra(s_spec), io::parse_algebra(t_spec), rho, b_dim, c_dim);
      } else {
        need(x_spec, "--x");
        need(z_spec, "--z");
        const cmat x = io::parse_basis(x_spec), z = io::parse_basis(z_spec);
        if (relation == "coherence") {
          report = coherence_ucr(x, z, rho);
        } else {
          const Index d = a_dim > 0 ? a_dim : x.rows();
          report = relation == "memory" ? memory_ucr(d, rho, x, z) : memory_ucr_general(d, rho, x, z);
        }
      }
      if (globals.tolerance) report.tolerance = *globals.tolerance;
      emit(io::to_json(report));
      return kOk;
    };
  });

  // measure
  std::string kind;
  Index ext_dim = 0;
  MeasureOptions measure_options;
  auto* measure = app.add_subcommand("measure", "Squashed, convex-roof or extension non-classicality");
  measure->add_option("--kind", kind)->required()->check(CLI::IsMember({"isq", "iconv", "iext"}));
  measure->add_option("--state", state_spec)->required();
  measure->add_option("--s", s_spec)->required();
  measure->add_option("--t", t_spec)->required();
  measure->add_option("--ext-dim", ext_dim, "Extension size (isq, iconv) or ancilla budget (iext)");
  measure->add_option("--restarts", measure_options.restarts)->check(CLI::NonNegativeNumber);
  seed_option(measure, measure_options.seed);
  measure->callback([&] {
    run = [&](io::RunManifest&) {
      const VnAlgebra s = io::parse_algebra(s_spec), t = io::parse_algebra(t_spec);
      const cmat rho = io::parse_state(state_spec);
      MeasureEstimate est;
      if (kind == "iext") {
        est = iext_estimate({classify_square(s, t, join(s, t))}, rho, ext_dim > 0 ? ext_dim : 4, measure_options);
      } else {
        measure_options.size = ext_dim;
        est = kind == "isq" ? isq_estimate(s, t, rho, measure_options) : iconv_estimate(s, t, rho, measure_options);
      }
      json report = io::to_json(est);
      report["measure"] = kind;
      emit(report);
      std::cerr << kind << " = " << est.value_bits << " bits ("
                << (est.exactness == Exactness::exact_pure_path ? "exact" : "upper bound") << ")\n";
      return kOk;
    };
  });

  // scan
  std::string suite_text, dims_text, out_path;
  ScanOptions scan_options;
  auto* scan = app.add_subcommand("scan", "Property scan over seeded instances");
  scan->add_option("--suite", suite_text)->required();
  scan->add_option("--dims", dims_text, "Comma list of dimensions or ranges a..b")->required();
  scan->add_option("--samples", scan_options.samples)->check(CLI::PositiveNumber);
  scan->add_option("--states", scan_options.states_per_sample, "Densities per square (ssa, recovery)")
      ->check(CLI::PositiveNumber);
  scan->add_option("--out", out_path, "NDJSON records and summary (default stdout)");
  seed_option(scan, scan_options.seed);
  scan->callback([&] {
    run = [&](io::RunManifest& m) {
      const Suite suite = parse_suite(suite_text);
      scan_options.dims = parse_dims(dims_text);
      scan_options.tolerance = globals.tolerance;
      const auto records = run_scan(suite, scan_options);
      const auto summary = summarize(suite, records);

      std::ofstream file;
      if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw DomainError("cannot write '" + out_path + "'");
        m.outputs.push_back(out_path);
        if (globals.manifest_path.empty()) globals.manifest_path = out_path + ".manifest.json";
      }
      std::ostream& out = out_path.empty() ? std::cout : file;
      for (const auto& r : records) emit(io::to_json(r), out);
      emit(io::to_json(summary), out);
      m.config["dims"] = scan_options.dims;
      m.config["samples"] = scan_options.samples;
      m.config["states"] = scan_options.states_per_sample;
      m.config["seed"] = scan_options.seed;

      std::cerr << summary.suite << ": " << summary.records << " records, " << summary.failures << " failures\n";
      for (const auto& c : summary.checks)
        std::cerr << "  " << c.name << ": min margin " << c.min_margin_bits << " (tolerance " << c.tolerance << ", "
                  << c.failures << "/" << c.evaluated << " failed)\n";
      return summary.pass() ? kOk : kCheckFailed;
    };
  });

  // demo
  std::string demo_name;
  std::uint64_t demo_seed = 0;
  Index prime = 3, state_basis = 0;
  auto* demo = app.add_subcommand("demo", "Worked scenarios with transcripts");
  demo->add_option("--name", demo_name)->required()->check(CLI::IsMember({"epr-ucr", "monogamy"}));
  demo->add_option("--p", prime, "Prime dimension (monogamy)");
  demo->add_option("--state-basis", state_basis, "Basis holding the state (monogamy)");
  seed_option(demo, demo_seed);
  demo->callback([&] {
    run = [&](io::RunManifest&) {
      if (demo_name == "monogamy") {
        const auto table = monogamy_table(prime, state_basis);
        emit(io::to_json(table));
        std::cerr << "ordered sum " << table.ordered_sum_bits << " bits, ceiling " << table.ceiling_bits << " bits\n";
        return kOk;
      }
      const Transcript t = epr_ucr_demo(demo_seed);
      emit(io::to_json(t));
      for (const auto& step : t.steps) {
        std::cerr << (step.pass ? "ok   " : "FAIL ") << step.name;
        if (step.value_bits) std::cerr << "  half I = " << *step.value_bits << " bits";
        std::cerr << "  " << step.detail << '\n';
      }
      return t.pass() ? kOk : kCheckFailed;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  manifest.command = app.get_subcommands().front()->get_name();
  for (const auto& [name, spec] : {std::pair{"s", &s_spec}, {"t", &t_spec}, {"within", &within_spec},
                                   {"state", &state_spec}, {"algebra", &algebra_spec}, {"sigma", &sigma_spec},
                                   {"x", &x_spec}, {"z", &z_spec}})
    if (!spec->empty()) manifest.input_digests.emplace_back(name, input_digest(*spec));
  for (const auto* opt : app.get_subcommands().front()->get_options())
    if (opt->count() > 0 && !opt->get_lnames().empty()) manifest.config[opt->get_lnames().front()] = opt->as<std::string>();
  if (globals.tolerance) manifest.config["tolerance"] = *globals.tolerance;

  try {
    const int code = run(manifest);
    write_manifest(manifest, globals.manifest_path);
    return code;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}
