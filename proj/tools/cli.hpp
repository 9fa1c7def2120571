#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qortho/serialize.hpp"

namespace qortho::cli {

enum ExitCode { exit_pass = 0, exit_assertion = 1, exit_bad_input = 2, exit_numeric = 3 };

struct RunConfig {
  std::string command;
  std::string claim;
  std::string q = "1/2";
  std::string alpha = "0";
  std::string weight = "unit";
  std::string weight_table;
  long n_max = 16;
  std::string precision = "auto";
  std::string tail_eps = "auto";
  std::string format = "json";
  std::string output;
  bool timing = false;
  long j_max = 80;
  bool det_check = false;
  std::string label = "all";
  std::string n_set;
  std::vector<std::string> outer_z{"3/4", "2"};
  long adm_lo = 4;
  long adm_hi = 20;
};

struct Artifact {
  Json json;
  std::string csv;
  bool passed = true;
};

int exit_code_for(ErrorKind kind);

// Runs one command; throws qortho::Error on failure.
Artifact run(const RunConfig& config);

// Full command line entry: parses, runs, writes the artifact and returns the exit code.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qortho::cli
