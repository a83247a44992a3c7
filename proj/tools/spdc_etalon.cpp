// spdc_etalon: spectra, model comparison, gain curves, linear transmission
// and detection spectra for a nonlinear thin-film etalon.
#include <spdc/cli.hpp>

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Photon-pair spectra of a nonlinear thin-film etalon"};
  app.set_version_flag("--version", std::string("spdc-etalon ") + spdc::version);

  std::string command;
  std::string config_path;
  std::string model;
  spdc::RunOptions options;

  app.add_option("command", command, "spectrum | compare | gain-curve | transmission | detection")
      ->required()
      ->check(CLI::IsMember(spdc::commands()));
  app.add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
  app.add_option("--model", model, "override the config model")
      ->check(CLI::IsMember({"rigorous", "simplified", "nonresonant"}));
  app.add_option("--scheme", options.scheme, "ff|bb|fb|bf, forward|backward|forward_backward, or all");
  app.add_option("--out", options.out, "output CSV path (overrides the config)");
  app.add_option("--threads", options.threads, "worker threads; results do not depend on it")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : spdc::exit_config_error;
  }
  if (!model.empty()) options.model = spdc::parse_model(model);
  return spdc::run_file(command, config_path, options, std::cout, std::cerr);
}
