#include "cli_app.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return gstein::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
