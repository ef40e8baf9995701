#include <CLI11.hpp>

#include <iostream>

#include "wxda/errors.hpp"

namespace wxda::tool {
void add_data_commands(CLI::App& app);
void add_cycle_commands(CLI::App& app);
void add_verify_commands(CLI::App& app);
}  // namespace wxda::tool

int main(int argc, char** argv) {
  CLI::App app{
      "wxda - observation gridding, quality control, Cressman dilation, "
      "assimilation-forecast cycling and verification"};
  app.require_subcommand(1);

  wxda::tool::add_data_commands(app);
  wxda::tool::add_cycle_commands(app);
  wxda::tool::add_verify_commands(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const wxda::ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return 2;
  } catch (const wxda::DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return 2;
  } catch (const wxda::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
