// Command-line front end: one subcommand per run type, every config key
// settable from a file, a replayed output header, --set key=value or --<key>.
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sfvol/commands.hpp"
#include "sfvol/config.hpp"
#include "sfvol/error.hpp"

namespace {

struct SubcommandArgs {
  std::string config_file;
  std::string replay_file;
  std::vector<std::string> sets;
  std::map<std::string, std::optional<std::string>> keys;
  bool print_config = false;
};

const std::vector<std::pair<std::string, std::string>> kCommands = {
    {"simulate", "simulate a variance/return path"},
    {"mechanism", "run the order-flow mechanism and check it reduces to the model"},
    {"estimate", "estimate sigma0^2 and B from a price or path CSV"},
    {"analyze", "ACFs, beta' distribution and return PDFs"},
    {"fit", "goodness-of-fit table for the beta' distribution"},
    {"compare", "model against data: ACF and beta' survival"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sfvol: stochastic feedback volatility model"};
  app.require_subcommand(1);
  std::map<std::string, SubcommandArgs> args;

  for (const auto& [name, help] : kCommands) {
    auto* sub = app.add_subcommand(name, help);
    auto& a = args[name];
    sub->add_option("--config", a.config_file, "key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--replay", a.replay_file, "reuse the config header of an earlier output")
        ->check(CLI::ExistingFile);
    sub->add_option("--set", a.sets, "override one key: --set key=value");
    sub->add_flag("--print-config", a.print_config, "print the resolved config and exit");
    for (const auto& k : sfvol::config_keys()) {
      std::string help_text = k.help;
      if (!k.default_value.empty()) help_text += " [" + k.default_value + "]";
      sub->add_option("--" + k.name, a.keys[k.name], help_text);
    }
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();
  auto& a = args[command];

  try {
    std::map<std::string, std::string> values;
    if (!a.config_file.empty()) values = sfvol::read_config_file(a.config_file);
    if (!a.replay_file.empty())
      for (const auto& [k, v] : sfvol::read_replay_file(a.replay_file)) values[k] = v;
    for (const auto& s : a.sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos)
        throw sfvol::ValidationError("--set expects key=value, got '" + s + "'");
      values[s.substr(0, eq)] = s.substr(eq + 1);
    }
    for (const auto& [k, v] : a.keys)
      if (v) values[k] = *v;

    const sfvol::RunConfig cfg = sfvol::resolve_config(command, values);
    if (a.print_config) {
      std::cout << cfg.to_json().dump(2) << '\n';
      return 0;
    }
    const auto summary = sfvol::run_command(cfg, std::cerr);
    if (command == "estimate") std::cout << summary.dump(2) << '\n';
    return 0;
  } catch (const sfvol::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const sfvol::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const sfvol::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const sfvol::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  }
}
