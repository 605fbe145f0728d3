// qproj: run one computation on a manifest and print its report.
//
//   qproj hilbert quadric_commutative
//   qproj ext manifests/quadric_commutative.toml X Y q=1 --window -5..5
//   qproj regularity qvas_counterexample --format table

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qproj/cli.hpp"

int main(int argc, char** argv) {
  using namespace qproj::cli;

  CLI::App app{"Graded algebra and quadric workbench"};
  app.set_version_flag("--version", "qproj 1.0.0");
  std::string command, manifest, format = "json", out, window;
  Options opts;
  int truncation = 0, hbound = 0;

  app.add_option("command", command, "Computation to run")->required()->check(CLI::IsMember(commands()));
  app.add_option("manifest", manifest, "Manifest path or bundled manifest name")->required();
  app.add_option("args", opts.args, "Module references and key=value arguments");
  app.add_option("--truncation", truncation, "Truncation degree D")->check(CLI::PositiveNumber);
  app.add_option("--hbound", hbound, "Homological bound h")->check(CLI::PositiveNumber);
  app.add_option("--window", window, "Degree or index window a..b");
  app.add_option("--field", opts.field, "q or p:<prime>");
  app.add_option("--format", format, "json or table")->check(CLI::IsMember({"json", "table"}));
  app.add_option("--out", out, "Write the report to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_usage;
  }

  Manifest m;
  try {
    if (truncation > 0) opts.truncation = truncation;
    if (hbound > 0) opts.hbound = hbound;
    if (!window.empty()) opts.window = parse_window(window);
    m = load_manifest(manifest);
  } catch (const UsageError& e) {
    std::cerr << "qproj: " << e.what() << "\n";
    return exit_usage;
  }

  Outcome r = run(command, m, opts);
  const std::string text = emit(r.report, format);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) {
      std::cerr << "qproj: cannot write " << out << "\n";
      return exit_usage;
    }
    f << text;
  }
  if (r.report.contains("error")) std::cerr << "qproj: " << r.report["error"].get<std::string>() << "\n";
  return r.exit_code;
}
