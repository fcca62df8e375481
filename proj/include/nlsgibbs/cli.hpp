#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlsgibbs::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumeric = 3 };

/// Bad command line or config file. `path` names the offending setting as "<command>.<key>".
class UsageError : public std::runtime_error {
  public:
    UsageError(std::string path, const std::string &what) : std::runtime_error(what), path_(std::move(path)) {}
    [[nodiscard]] const std::string &path() const noexcept { return path_; }

  private:
    std::string path_;
};

/// Flat "key = value" lines; '#' starts a comment. Keys map to the long flag of the same name.
std::vector<std::pair<std::string, std::string>> read_config(std::istream &is, const std::string &source);

std::vector<std::string> subcommands();

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
int run(int argc, char **argv);

}  // namespace nlsgibbs::cli
