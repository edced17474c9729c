#include <exception>
#include <iostream>

#include "gsvt_cli.hpp"

int main(int argc, char** argv) {
  try {
    return gsvt::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
