#include "forchheimer/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  namespace fc = forchheimer::cli;
  fc::CommandLine cmd;
  fc::RunOptions options;
  try {
    options = cmd.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cmd.exit(e);
  } catch (const fc::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << cmd.help();
    return fc::kUsage;
  }
  return fc::run(options, std::cout, std::cerr);
}
