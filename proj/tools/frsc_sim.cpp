// frsc-sim: command-line front end for the fee-redistribution simulator.
//
// Exit codes: 0 success, 2 configuration error, 1 runtime error.

#include <iostream>
#include <string>
#include <vector>

#include "frsc/config.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  frsc::RunConfig config;
  try {
    config = frsc::parse_config(args);
  } catch (const frsc::HelpRequested& help) {
    std::cout << help.what();
    return 0;
  } catch (const frsc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  try {
    frsc::run_command(config, std::cout);
  } catch (const frsc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
