#ifndef SEMGRAPH_CLI_HPP
#define SEMGRAPH_CLI_HPP

#include <iostream>
#include <string>
#include <vector>

namespace semgraph {

// Runs one CLI invocation. Exit codes: 0 success / all checks pass,
// 1 domain failure (parse rejection, FAIL lines, evaluation error),
// 2 usage error.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace semgraph

#endif
