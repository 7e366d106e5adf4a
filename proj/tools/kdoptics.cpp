#include <iostream>
#include <string>
#include <vector>

#include "kdoptics/cli/app.hpp"

int main(int argc, char** argv) {
  return kdoptics::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
