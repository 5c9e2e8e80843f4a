#include "ngd/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ngd/analysis.hpp"
#include "ngd/decompose.hpp"
#include "ngd/error.hpp"
#include "ngd/extension.hpp"
#include "ngd/funcspec.hpp"
#include "ngd/report.hpp"

namespace ngd::cli {

namespace {

using nlohmann::json;

struct RunConfig {
  std::string subcommand;
  std::string instance;
  std::string eps = "1/100000000";
  std::uint64_t seed = 0;
  std::size_t grid_n = 12;
  std::size_t grid_irr = 6;
  std::string steps;
  bool grid_steps = true;
  std::size_t max_grid_steps = 0;
  std::string points;
  std::string out;
  // gen
  std::string variant = "Decomposable";
  std::string basis = "2";
  unsigned hinges = 8;
  bool rational_coefficient = false;
  std::string interval;
  // eval / verify / verify-certificate / report
  std::string at;
  std::string result;
  std::string truth;
  std::string certificate;
  std::string csv;

  json to_json() const {
    json doc{{"subcommand", subcommand}, {"seed", seed}};
    if (!instance.empty()) doc["instance"] = instance;
    if (!out.empty()) doc["out"] = out;
    if (subcommand == "decompose" || subcommand == "report") doc["eps"] = format_rational(parse_rational(eps));
    if (subcommand == "check-wright" || subcommand == "check-jensen" || subcommand == "decompose" ||
        subcommand == "report") {
      doc["grid_n"] = grid_n;
      doc["grid_irr"] = grid_irr;
    }
    if (subcommand == "check-wright") {
      doc["steps"] = split_literals(steps);
      doc["grid_steps"] = grid_steps;
      doc["max_grid_steps"] = max_grid_steps;
      if (!points.empty()) doc["points"] = split_literals(points);
    }
    if (subcommand == "eval") doc["at"] = at;
    if (subcommand == "verify") {
      doc["result"] = result;
      doc["truth"] = truth;
    }
    if (subcommand == "verify-certificate") doc["certificate"] = certificate;
    if (subcommand == "report") doc["csv"] = csv;
    return doc;
  }

  static std::vector<std::string> split_literals(const std::string& list) {
    std::vector<std::string> items;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item.erase(0, item.find_first_not_of(" \t"));
      item.erase(item.find_last_not_of(" \t") + 1);
      if (!item.empty()) items.push_back(item);
    }
    return items;
  }
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  const std::filesystem::path target(path);
  namespace fs = std::filesystem;
  const fs::file_status st = fs::status(target);
  if (fs::exists(st) && !fs::is_regular_file(st)) {
    // devices and pipes cannot be replaced by a rename
    std::ofstream file(target, std::ios::binary);
    if (!file) throw Error(ErrorCode::Parse, "cannot write " + path);
    file << text;
    return;
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorCode::Parse, "cannot write " + tmp.string());
    file << text;
    if (!file.flush()) throw Error(ErrorCode::Parse, "cannot write " + tmp.string());
  }
  fs::rename(tmp, target);
}

void write_json(const std::string& path, const json& doc, std::ostream& out) {
  write_text(path, doc.dump(2) + "\n", out);
}

std::vector<Radical> parse_basis(const std::string& text) {
  std::vector<Radical> basis;
  for (const std::string& item : RunConfig::split_literals(text)) {
    Radical m = 0;
    try {
      m = std::stoull(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::Parse, "basis entry '" + item + "' is not an integer");
    }
    if (!is_squarefree(m)) throw Error(ErrorCode::Parse, "basis entry " + item + " is not squarefree");
    basis.push_back(m);
  }
  return basis;
}

FunctionDef load_instance(const std::string& path) {
  if (path.empty()) throw Error(ErrorCode::Parse, "--instance is required");
  return instance_from_json(read_json(path));
}

SampleGrid grid_for(const FunctionDef& f, const RunConfig& cfg) {
  if (cfg.points.empty()) return make_grid(f.interval, cfg.grid_n, cfg.grid_irr, f.basis, cfg.seed);
  // explicit points replace the whole grid
  SampleGrid grid;
  grid.interval = f.interval;
  grid.seed = cfg.seed;
  {
    for (const std::string& p : RunConfig::split_literals(cfg.points)) {
      const ExactReal x = ExactReal::parse(p);
      if (!f.interval.contains(x)) throw Error(ErrorCode::OutOfDomain, "grid point " + p + " outside the interval");
      if (x.is_rational()) {
        grid.rationals.push_back(x.as_rational());
      } else {
        grid.probes.push_back(x);
      }
    }
    std::sort(grid.rationals.begin(), grid.rationals.end());
    grid.rationals.erase(std::unique(grid.rationals.begin(), grid.rationals.end()), grid.rationals.end());
    std::sort(grid.probes.begin(), grid.probes.end(), less);
    grid.probes.erase(std::unique(grid.probes.begin(), grid.probes.end()), grid.probes.end());
  }
  return grid;
}

int cmd_gen(const RunConfig& cfg, std::ostream& out) {
  GeneratorProfile profile;
  profile.kind = parse_variant(cfg.variant);
  profile.basis = parse_basis(cfg.basis);
  profile.max_hinges = cfg.hinges;
  profile.rational_coefficient = cfg.rational_coefficient;
  if (!cfg.interval.empty()) profile.interval = Interval::parse(cfg.interval);
  write_json(cfg.out, instance_to_json(generate(cfg.seed, profile)), out);
  return kClean;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  const FunctionDef f = load_instance(cfg.instance);
  const ExactReal x = ExactReal::parse(cfg.at);
  json doc{{"config", cfg.to_json()}, {"at", x.str()}, {"value", evaluate(f, x).str()}};
  write_json(cfg.out, doc, out);
  return kClean;
}

int cmd_check(const RunConfig& cfg, std::ostream& out, bool wright) {
  const FunctionDef f = load_instance(cfg.instance);
  const SampleGrid grid = grid_for(f, cfg);
  CheckResult result;
  if (wright) {
    StepProfile steps;
    for (const std::string& s : RunConfig::split_literals(cfg.steps)) steps.explicit_steps.push_back(ExactReal::parse(s));
    steps.grid_differences = cfg.grid_steps;
    steps.max_grid_steps = cfg.max_grid_steps;
    result = wright_check(f, grid, steps);
  } else {
    result = jensen_check(f, grid);
  }
  json doc{{"config", cfg.to_json()},
           {"check", wright ? "wright" : "jensen"},
           {"grid", {{"rationals", grid.rationals.size()}, {"probes", grid.probes.size()}}},
           {"result", to_json(result)},
           {"instance", instance_to_json(f)}};
  write_json(cfg.out, doc, out);
  return result.passed() ? kClean : kViolation;
}

int cmd_decompose(const RunConfig& cfg, std::ostream& out) {
  const FunctionDef f = load_instance(cfg.instance);
  const SampleGrid grid = make_grid(f.interval, cfg.grid_n, cfg.grid_irr, f.basis, cfg.seed);
  DecomposeOptions options;
  options.seed = cfg.seed;
  try {
    const DecompositionResult result = decompose(f, parse_rational(cfg.eps), grid, options);
    json doc = to_json(result);
    doc["config"] = cfg.to_json();
    write_json(cfg.out, doc, out);
    // the result is still written when a residual check fails
    return result.residuals.ok() ? kClean : kViolation;
  } catch (const NotJensenConvexError& e) {
    json doc{{"config", cfg.to_json()},
             {"error", "NotJensenConvex"},
             {"result", to_json(CheckResult{e.certificate(), 0})},
             {"instance", instance_to_json(f)}};
    doc["certificate"] = to_json(e.certificate());
    write_json(cfg.out, doc, out);
    return kViolation;
  }
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  if (cfg.result.empty() || cfg.truth.empty()) throw Error(ErrorCode::Parse, "verify needs --result and --truth");
  const DecompositionResult result = decomposition_from_json(read_json(cfg.result));
  const FunctionDef truth = load_instance(cfg.truth);
  const VerificationReport report = verify_against_truth(result, truth);
  json doc{{"config", cfg.to_json()}, {"verification", to_json(report)}};
  write_json(cfg.out, doc, out);
  return report.passed() ? kClean : kViolation;
}

int cmd_verify_certificate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.certificate.empty()) throw Error(ErrorCode::Parse, "verify-certificate needs --certificate");
  const json doc = read_json(cfg.certificate);
  json cert_doc;
  if (doc.contains("kind")) {
    cert_doc = doc;
  } else if (doc.contains("certificate")) {
    cert_doc = doc.at("certificate");
  } else if (doc.contains("result") && doc.at("result").contains("certificate")) {
    cert_doc = doc.at("result").at("certificate");
  } else {
    throw Error(ErrorCode::Parse, cfg.certificate + " carries no certificate");
  }
  FunctionDef f;
  if (!cfg.instance.empty()) {
    f = load_instance(cfg.instance);
  } else if (doc.contains("instance")) {
    f = instance_from_json(doc.at("instance"));
  } else {
    throw Error(ErrorCode::Parse, "no instance: pass --instance or embed one in the certificate report");
  }
  const ViolationCertificate cert = certificate_from_json(cert_doc);
  const CertificateCheck check = verify_certificate(f, cert);
  json report{{"config", cfg.to_json()},
              {"reproduced", check.reproduced},
              {"violated", check.violated},
              {"valid", check.valid()},
              {"value", cert.value().str()}};
  if (!check.detail.empty()) report["detail"] = check.detail;
  write_json(cfg.out, report, out);
  return check.valid() ? kClean : kViolation;
}

int cmd_report(const RunConfig& cfg, std::ostream& out) {
  const FunctionDef f = load_instance(cfg.instance);
  const SampleGrid grid = make_grid(f.interval, cfg.grid_n, cfg.grid_irr, f.basis, cfg.seed);
  const Rational eps = parse_rational(cfg.eps);
  const ExtensionHandle h(f);
  std::string csv = "x_literal,lo,hi,width\n";
  for (const ExactReal& x : grid.points()) {
    const Enclosure e = h.extend_eval(x, eps);
    csv += x.str() + "," + format_rational(e.lo) + "," + format_rational(e.hi) + "," + format_rational(e.width()) + "\n";
  }
  write_text(cfg.csv, csv, out);
  if (!cfg.out.empty()) {
    json doc{{"config", cfg.to_json()}, {"rows", grid.size()}};
    write_json(cfg.out, doc, out);
  }
  return kClean;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Wright/Jensen convexity checks and additive-part recovery", "ngdecomp"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_grid = [&](CLI::App* sub, std::size_t n, std::size_t irr) {
    cfg.grid_n = n;
    cfg.grid_irr = irr;
    sub->add_option("--grid-n", cfg.grid_n, "rational grid points")->capture_default_str();
    sub->add_option("--grid-irr", cfg.grid_irr, "irrational probe points")->capture_default_str();
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-i,--instance", cfg.instance, "instance JSON file");
    sub->add_option("-o,--out", cfg.out, "output file (stdout when omitted)");
    sub->add_option("--seed", cfg.seed, "grid / generator seed");
  };

  CLI::App* gen = app.add_subcommand("gen", "generate an instance");
  add_common(gen);
  gen->add_option("--variant", cfg.variant, "Decomposable | AbsAdditive | Spiked");
  gen->add_option("--basis", cfg.basis, "comma-separated squarefree radicals");
  gen->add_option("--hinges", cfg.hinges, "maximum hinge count (<= 8)")->check(CLI::Range(0U, 8U));
  gen->add_flag("--rational-coefficient", cfg.rational_coefficient, "draw A(1) != 0");
  gen->add_option("--interval", cfg.interval, "domain literal, e.g. \"(-10, 10)\"");

  CLI::App* eval = app.add_subcommand("eval", "evaluate an instance exactly");
  add_common(eval);
  eval->add_option("--at", cfg.at, "ExactReal literal")->required();

  CLI::App* wright = app.add_subcommand("check-wright", "exact Wright convexity sweep");
  add_common(wright);
  wright->add_option("--steps", cfg.steps, "comma-separated explicit steps, tried first");
  wright->add_option("--max-grid-steps", cfg.max_grid_steps, "cap on grid-difference steps (0 = all)");
  wright->add_flag("!--no-grid-steps", cfg.grid_steps, "use only the explicit steps");
  wright->add_option("--points", cfg.points, "comma-separated grid points replacing the sampled grid");

  CLI::App* jensen = app.add_subcommand("check-jensen", "exact Jensen convexity sweep");
  add_common(jensen);

  CLI::App* dec = app.add_subcommand("decompose", "recover the additive part");
  add_common(dec);
  dec->add_option("--eps", cfg.eps, "enclosure width")->capture_default_str();

  CLI::App* ver = app.add_subcommand("verify", "compare a decomposition with the generating instance");
  ver->add_option("--result", cfg.result, "decompose output");
  ver->add_option("--truth", cfg.truth, "instance file with ground truth");
  ver->add_option("-o,--out", cfg.out, "output file");

  CLI::App* vc = app.add_subcommand("verify-certificate", "re-check a violation certificate");
  vc->add_option("--certificate", cfg.certificate, "certificate or report file");
  vc->add_option("-i,--instance", cfg.instance, "instance (defaults to the embedded one)");
  vc->add_option("-o,--out", cfg.out, "output file");

  CLI::App* rep = app.add_subcommand("report", "CSV of extension enclosures over a grid");
  add_common(rep);
  rep->add_option("--eps", cfg.eps, "enclosure width")->capture_default_str();
  rep->add_option("--csv", cfg.csv, "CSV output (stdout when omitted)");

  add_grid(wright, 12, 6);
  add_grid(jensen, 12, 6);
  add_grid(dec, 16, 8);
  add_grid(rep, 16, 8);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kClean;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kClean;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kFailure;
  }

  for (CLI::App* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
  // Grid defaults depend on the subcommand; CLI11 binds the last add_grid call.
  auto defaults = [&](std::size_t n, std::size_t irr, CLI::App* sub) {
    if (sub->count("--grid-n") == 0) cfg.grid_n = n;
    if (sub->count("--grid-irr") == 0) cfg.grid_irr = irr;
  };

  try {
    if (cfg.subcommand == "gen") return cmd_gen(cfg, out);
    if (cfg.subcommand == "eval") return cmd_eval(cfg, out);
    if (cfg.subcommand == "check-wright") {
      defaults(12, 6, wright);
      return cmd_check(cfg, out, true);
    }
    if (cfg.subcommand == "check-jensen") {
      defaults(12, 6, jensen);
      return cmd_check(cfg, out, false);
    }
    if (cfg.subcommand == "decompose") {
      defaults(16, 8, dec);
      return cmd_decompose(cfg, out);
    }
    if (cfg.subcommand == "verify") return cmd_verify(cfg, out);
    if (cfg.subcommand == "verify-certificate") return cmd_verify_certificate(cfg, out);
    if (cfg.subcommand == "report") {
      defaults(16, 8, rep);
      return cmd_report(cfg, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  err << "unknown subcommand\n";
  return kFailure;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace ngd::cli
