// qfc: run experiment descriptions against the simulator and write long-form
// tables. Exit codes: 0 success, 1 validation diagnostics, 2 usage/IO/runtime.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qfc/expspec.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kDiagnostics = 1;
constexpr int kRuntime = 2;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return std::nullopt;
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void print_diagnostics(const std::string& origin,
                       const std::vector<qfc::expspec::Diagnostic>& diags) {
  for (const auto& d : diags) {
    const char* sev =
        d.severity == qfc::expspec::Severity::Error ? "error" : "warning";
    std::cerr << origin << ':' << d.line << ':' << d.column << ": " << sev
              << '[' << d.code << "]: " << d.message << '\n';
  }
}

int write_table(const qfc::expspec::ResultTable& table,
                const qfc::expspec::OutputSpec& out) {
  const bool csv = out.format == qfc::expspec::OutputSpec::Format::Csv;
  if (out.path == "-") {
    csv ? qfc::expspec::emit_csv(table, std::cout)
        : qfc::expspec::emit_json(table, std::cout);
    return kOk;
  }
  std::ofstream f(out.path, std::ios::binary | std::ios::trunc);
  if (!f) {
    std::cerr << "cannot open '" << out.path << "' for writing\n";
    return kRuntime;
  }
  csv ? qfc::expspec::emit_csv(table, f) : qfc::expspec::emit_json(table, f);
  if (!f) {
    std::cerr << "short write to '" << out.path << "'\n";
    return kRuntime;
  }
  return kOk;
}

struct Overrides {
  std::string out_path;
  std::string format;
  std::optional<uint64_t> seed;

  void apply(qfc::expspec::ExperimentSpec& spec) const {
    if (!out_path.empty()) spec.output.path = out_path;
    if (format == "csv") {
      spec.output.format = qfc::expspec::OutputSpec::Format::Csv;
    } else if (format == "json") {
      spec.output.format = qfc::expspec::OutputSpec::Format::Json;
    }
    if (seed) spec.measure.seed = *seed;
  }
};

int execute(qfc::expspec::ExperimentSpec spec, const Overrides& ov,
            const std::string& origin) {
  ov.apply(spec);
  try {
    const qfc::expspec::ResultTable table = qfc::expspec::run(spec);
    return write_table(table, spec.output);
  } catch (const qfc::expspec::RunError& e) {
    std::cerr << origin << ':' << e.loc.line << ':' << e.loc.column
              << ": runtime error: " << e.what() << '\n';
    return kRuntime;
  } catch (const std::exception& e) {
    std::cerr << origin << ": runtime error: " << e.what() << '\n';
    return kRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequency-comb photon-pair experiment simulator"};
  app.require_subcommand(1);

  std::string file;
  Overrides ov;
  std::string preset_name;
  bool print_only = false;

  CLI::App* cmd_run = app.add_subcommand("run", "Run an experiment file");
  cmd_run->add_option("file", file, "experiment description")->required();
  cmd_run->add_option("--out", ov.out_path, "override the output path");
  cmd_run->add_option("--format", ov.format, "override the output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd_run->add_option("--seed", ov.seed, "override the time-tag seed");

  CLI::App* cmd_preset =
      app.add_subcommand("preset", "Run a built-in experiment");
  cmd_preset->add_option("name", preset_name, "preset name")->required();
  cmd_preset->add_option("--out", ov.out_path, "override the output path");
  cmd_preset->add_option("--format", ov.format, "override the output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd_preset->add_option("--seed", ov.seed, "override the time-tag seed");
  cmd_preset->add_flag("--print", print_only,
                       "print the canonical description instead of running");

  CLI::App* cmd_validate =
      app.add_subcommand("validate", "Check an experiment file");
  cmd_validate->add_option("file", file, "experiment description")->required();

  CLI::App* cmd_format = app.add_subcommand(
      "format", "Rewrite an experiment file in canonical form to stdout");
  cmd_format->add_option("file", file, "experiment description")->required();

  app.add_subcommand("list-presets", "List built-in experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kRuntime;
  }

  if (app.got_subcommand("list-presets")) {
    for (const std::string& name : qfc::expspec::preset_names()) {
      std::cout << name << '\t' << qfc::expspec::preset_description(name)
                << '\n';
    }
    return kOk;
  }

  if (app.got_subcommand(cmd_preset)) {
    auto spec = qfc::expspec::preset(preset_name);
    if (!spec) {
      std::cerr << "unknown preset '" << preset_name << "'; try one of:\n";
      for (const std::string& name : qfc::expspec::preset_names()) {
        std::cerr << "  " << name << '\n';
      }
      return kRuntime;
    }
    if (print_only) {
      std::cout << qfc::expspec::pretty_print(*spec);
      return kOk;
    }
    return execute(std::move(*spec), ov, "preset:" + preset_name);
  }

  const auto text = read_file(file);
  if (!text) {
    std::cerr << "cannot read '" << file << "'\n";
    return kRuntime;
  }
  qfc::expspec::ParseResult parsed = qfc::expspec::parse(*text);
  print_diagnostics(file, parsed.diagnostics);

  if (app.got_subcommand(cmd_validate)) {
    if (!parsed.ok()) return kDiagnostics;
    std::cout << "ok\n";
    return kOk;
  }
  if (!parsed.ok()) return kDiagnostics;

  if (app.got_subcommand(cmd_format)) {
    std::cout << qfc::expspec::pretty_print(*parsed.spec);
    return kOk;
  }
  return execute(std::move(*parsed.spec), ov, file);
}
