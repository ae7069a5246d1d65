#include <cstdlib>
#include <cstring>
#include <iostream>

#include "kdb/cli/commands.hpp"
#include "kdb/support/stack.hpp"

int main(int argc, char ** argv)
{
  const char * c = std::getenv("KDB_COLOR");
  kdb::cli::Io io{std::cout, std::cerr, c && std::strcmp(c, "1") == 0};
  int code = 0;
  kdb::with_stack(kdb::k_big_stack, [&] { code = kdb::cli::main_cli(argc, argv, io); });
  return code;
}
