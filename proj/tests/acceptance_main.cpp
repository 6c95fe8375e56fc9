#include <iostream>

#include "revq/acceptance.hpp"

int main() { return revq::accept::run_and_print(std::cout); }
