#include "bojtc/cli/config.hpp"

#include <fstream>

namespace bojtc::cli {

namespace {

std::string trim(const std::string& s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

} // namespace

std::vector<std::pair<std::string, std::string>>
readKeyValueFile(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw UsageError("cannot open config file " + path.string());

  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line))
  {
    ++lineNo;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#')
      continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw UsageError(path.string() + ":" + std::to_string(lineNo) +
                       ": expected key=value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw UsageError(path.string() + ":" + std::to_string(lineNo) +
                       ": empty key");
    if (key.starts_with("--"))
      key.erase(0, 2);
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

std::vector<std::string> expandConfig(std::vector<std::string> args)
{
  std::string configPath;
  for (std::size_t i = 1; i < args.size(); ++i)
  {
    if (args[i] == "--config")
    {
      if (i + 1 >= args.size())
        throw UsageError("--config needs a path");
      configPath = args[i + 1];
    }
    else if (args[i].starts_with("--config="))
      configPath = args[i].substr(9);
  }
  if (configPath.empty())
    return args;

  std::size_t sub = 1;
  while (sub < args.size() && args[sub].starts_with("-"))
    ++sub;
  if (sub >= args.size())
    throw UsageError("--config needs a subcommand");

  std::vector<std::string> injected;
  for (const auto& [key, value] : readKeyValueFile(configPath))
  {
    if (key == "config")
      throw UsageError("config files cannot include other config files");
    injected.push_back("--" + key + "=" + value);
  }
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub) + 1,
              injected.begin(), injected.end());
  return args;
}

} // namespace bojtc::cli
