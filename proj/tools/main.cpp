#include "jackflow/shell.hpp"

int main(int argc, char** argv) { return jackflow::shell::cli_dispatch(argc, argv); }
