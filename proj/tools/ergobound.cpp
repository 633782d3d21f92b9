// Copyright 2026 The ergobound Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <vector>

#include "ergobound/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return ergobound::cli::run_cli(args, std::cout, std::cerr);
}
