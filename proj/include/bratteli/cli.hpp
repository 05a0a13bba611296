#ifndef BRATTELI_CLI_HPP
#define BRATTELI_CLI_HPP

#include <string>
#include <vector>

namespace bratteli::cli {

// Exit status taxonomy: 0 pass, 1 definite negative verdict, 2 inconclusive,
// 3 input error.
int run(const std::vector<std::string>& args);

}  // namespace bratteli::cli

#endif
