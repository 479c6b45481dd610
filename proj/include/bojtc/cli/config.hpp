#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bojtc::cli {

/// Bad flags, bad config files, missing or unreadable inputs: exit code 2.
struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

/// Plain key=value lines. Blank lines and lines starting with '#' are
/// skipped; keys and values are trimmed. Order is preserved.
std::vector<std::pair<std::string, std::string>>
readKeyValueFile(const std::filesystem::path& path);

/// Inserts the config file entries as --key=value right after the
/// subcommand, so flags given later on the command line override them.
/// The config file is named by --config <path> or --config=<path>.
std::vector<std::string> expandConfig(std::vector<std::string> args);

} // namespace bojtc::cli
