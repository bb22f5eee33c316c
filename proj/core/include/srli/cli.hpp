#ifndef SRLI_CLI_HPP
#define SRLI_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace srli::cli {

// Entry point behind the srli binary. Subcommands: train, label, evaluate,
// baseline, synth, inspect. Returns 0 on success, 1 on usage errors, 2 on
// data or model errors. Logs go to `err`, data to files or `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace srli::cli

#endif
