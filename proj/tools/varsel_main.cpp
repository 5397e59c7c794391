#include "commands.hpp"

#include "varsel/dataset.hpp"

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Variable selection for Gaussian-mixture clustering"};
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  varsel::cli::Commands commands(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    return commands.run();
  } catch (const varsel::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
