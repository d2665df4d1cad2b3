#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "tfi/tfi.hpp"

using namespace tfi::cli;

int main(int argc, char** argv) {
  CLI::App app{"Spectral interference toolkit: STFT, ridges, zeros, reassignment and synchrosqueezing"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tfi::kVersion);

  std::string config_path;
  auto add_field_command = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", config_path, "key=value config file");
    sub->allow_extras();
    sub->footer("Any config key may be overridden with --key=value, e.g. --model.delta=0.3");
    return sub;
  };
  CLI::App* stft = add_field_command("stft", "STFT magnitude, parts and phase on the grid");
  CLI::App* ridges = add_field_command("ridges", "ridge points, maxima counts, bifurcations and bubble ellipses");
  CLI::App* zeros = add_field_command("zeros", "STFT zeros with winding numbers");
  CLI::App* reassign = add_field_command("reassign", "reassignment fields, arc circles and attraction audit");
  CLI::App* squeeze = add_field_command("squeeze", "squeezed transform field and cross-sections");

  CLI::App* critical = add_field_command("critical", "critical frequency gap and empirical bracket");
  std::string method;
  double a = 1.0, sigma = 1.4142135623730951;
  critical->add_option("method", method, "stft or sst")->required()->check(CLI::IsMember({"stft", "sst"}));
  critical->add_option("--a", a, "amplitude ratio")->capture_default_str();
  critical->add_option("--sigma", sigma, "window width")->capture_default_str();

  CLI::App* validate = app.add_subcommand("validate", "run the acceptance suite");
  std::string level = "fast";
  validate->add_option("level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  auto source_for = [&](CLI::App* sub) {
    ConfigSource src;
    if (!config_path.empty()) src.add_file(config_path);
    for (const auto& extra : sub->remaining()) src.add_override(extra);
    return src;
  };
  return guarded(
      [&]() -> int {
        if (validate->parsed()) return cmd_validate(level, std::cout);
        if (stft->parsed()) return cmd_stft(source_for(stft), std::cout);
        if (ridges->parsed()) return cmd_ridges(source_for(ridges), std::cout);
        if (zeros->parsed()) return cmd_zeros(source_for(zeros), std::cout);
        if (reassign->parsed()) return cmd_reassign(source_for(reassign), std::cout);
        if (squeeze->parsed()) return cmd_squeeze(source_for(squeeze), std::cout);
        return cmd_critical(source_for(critical), a, sigma, method, std::cout);
      },
      std::cerr);
}
