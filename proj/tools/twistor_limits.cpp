// twistor-limits: batch runner for manifests of twistor-limit computations.
//
//   twistor-limits run <manifest> [--parallel] [--out-dir DIR]
//   twistor-limits validate <manifest>
//   twistor-limits --version
//
// Exit status: 0 success, 1 task failure, 2 unreadable/invalid manifest.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "twistor/error.hpp"
#include "twistor/manifest.hpp"
#include "twistor/runner.hpp"

namespace {

constexpr int kExitTaskFailure = 1;
constexpr int kExitBadInput = 2;

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  text = ss.str();
  return true;
}

int load(const std::string& path, twistor::cli::Manifest& m) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "twistor-limits: cannot read " << path << "\n";
    return kExitBadInput;
  }
  try {
    m = twistor::cli::parse_manifest(text);
  } catch (const twistor::Error& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return kExitBadInput;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperbolic-to-Euclidean twistor limit computations"};
  app.set_version_flag("--version", "twistor-limits " + std::string(twistor::cli::kVersion));
  app.require_subcommand(1);

  std::string manifest_path;
  bool parallel = false;
  std::string out_dir = ".";
  auto* run = app.add_subcommand("run", "Execute every task of a manifest");
  run->add_option("manifest", manifest_path, "Manifest JSON file")->required();
  run->add_flag("--parallel", parallel, "Run tasks concurrently (report order is unchanged)");
  run->add_option("--out-dir", out_dir, "Directory for CSV outputs");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Parse and check a manifest without running it");
  validate->add_option("manifest", validate_path, "Manifest JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitBadInput;
  }

  twistor::cli::Manifest m;
  if (*validate) {
    if (const int rc = load(validate_path, m)) return rc;
    std::cout << "valid: " << m.tasks.size() << " task(s)\n";
    return 0;
  }

  if (const int rc = load(manifest_path, m)) return rc;
  const auto result = twistor::cli::run(m, {parallel, out_dir});
  std::cout << result.report;
  return result.exit_code == 0 ? 0 : kExitTaskFailure;
}
