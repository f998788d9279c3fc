#pragma once

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "gsynth/smt_verify.hpp"

namespace gsynth {

inline std::vector<std::string> split_command(const std::string &s) {
  std::vector<std::string> parts;
  std::istringstream in(s);
  std::string w;
  while (in >> w)
    parts.push_back(w);
  return parts;
}

inline bool on_path(const std::string &exe) {
  const char *path = std::getenv("PATH");
  if (!path)
    return false;
  std::istringstream in(path);
  std::string dir;
  while (std::getline(in, dir, ':')) {
    if (dir.empty())
      continue;
    std::error_code ec;
    if (std::filesystem::exists(dir + "/" + exe, ec))
      return true;
  }
  return false;
}

/// Finds an SMT solver command: $GSYNTH_SOLVER, then z3/cvc5 on PATH,
/// then the bundled WebAssembly Z3 shim near the running binary or a
/// given directory hint.
inline std::vector<std::string> discover_solver_command(const std::string &hint_dir = {}) {
  if (const char *env = std::getenv("GSYNTH_SOLVER")) {
    auto cmd = split_command(env);
    if (!cmd.empty())
      return cmd;
  }
  if (on_path("z3"))
    return {"z3", "-in"};
  if (on_path("cvc5"))
    return {"cvc5", "--lang", "smt2", "--produce-models", "-"};

  std::vector<std::filesystem::path> roots;
  if (!hint_dir.empty())
    roots.push_back(hint_dir);
  std::error_code ec;
  auto self = std::filesystem::read_symlink("/proc/self/exe", ec);
  if (!ec)
    roots.push_back(self.parent_path());
  roots.push_back(std::filesystem::current_path(ec));
  for (const auto &root : roots) {
    std::filesystem::path dir = root;
    for (int up = 0; up < 5; ++up) {
      auto shim = dir / "tools" / "z3-wasm" / "shim.js";
      auto deps = dir / "tools" / "z3-wasm" / "node_modules";
      if (std::filesystem::exists(shim, ec) && std::filesystem::exists(deps, ec) &&
          on_path("node"))
        return {"node", shim.string()};
      if (!dir.has_parent_path() || dir.parent_path() == dir)
        break;
      dir = dir.parent_path();
    }
  }
  return {};
}

} // namespace gsynth
