#include "tropix/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  auto parsed = tropix::cli::parse_args(argc, argv, std::cout, std::cerr);
  if (auto* code = std::get_if<int>(&parsed)) return *code;
  return tropix::cli::run(std::get<tropix::cli::JobConfig>(parsed), std::cout, std::cerr);
}
