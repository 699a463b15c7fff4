// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <iostream>

#include "issir_cli/cli.hpp"

int main(int argc, char** argv) {
  return issir::cli::run(std::vector<std::string>(argv, argv + argc), std::cout,
                         std::cerr);
}
