#ifndef PDC_CLI_HPP
#define PDC_CLI_HPP

#include <stdexcept>

namespace pdc::cli {

// Exit codes of the pdc tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;        // I/O, parse or schema error
inline constexpr int kExitNoFringe = 2;     // fringe analysis found nothing
inline constexpr int kExitEmptyPosterior = 3;
inline constexpr int kExitUsage = 64;

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Entry point of the pdc command-line tool; returns the process exit code.
int main(int argc, char** argv);

} // namespace pdc::cli

#endif // PDC_CLI_HPP
