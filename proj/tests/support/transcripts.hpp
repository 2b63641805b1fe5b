#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "support/fixtures.hpp"

namespace arena::testing {

inline std::vector<std::string> transcript(const std::string& mission_id) {
  std::ifstream in(data_dir() / "transcripts" / (mission_id + ".txt"));
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace arena::testing
