#include <iostream>

#include "docstruct/cli/pipeline.hpp"

int main(int argc, char** argv) { return docstruct::cli::run(argc, argv, std::cout, std::cerr); }
