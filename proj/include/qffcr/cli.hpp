#pragma once

#include <iosfwd>
#include <map>
#include <string>

namespace qffcr::cli {

enum ExitCode : int { kOk = 0, kValidationFailed = 1, kUsage = 2, kDegenerate = 3 };

// Flat key=value text. "#cfg key=value" lines (as echoed in CSV headers) are
// read as settings; any other line starting with '#' is a comment. In a file
// holding #cfg lines, the first non-comment line ends the settings.
std::map<std::string, std::string> parse_flat_config(std::istream& in);

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qffcr::cli
