#include "gradshop/commands.hpp"

int main(int argc, char** argv) { return gradshop::run_cli(argc, argv); }
