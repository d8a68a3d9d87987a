#pragma once

// Subcommand implementations behind the ppart executable. Each returns the
// process exit code: 0 success, 1 verification failure, 2 usage or input error.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "ppart/tree.hpp"

namespace ppart::cli {

enum class Format { Json, Csv };

struct GenOptions {
  std::string distribution = "uniform-box";
  std::size_t n = 1000;
  int d = 2;
  std::uint64_t seed = 1;
  bool integer_weights = false;
  std::string poly_file;  // on-variety only: JSON polynomial
  std::string output;     // empty: stdout
};

struct RangesOptions {
  std::string kind = "ball";
  std::size_t count = 100;
  int d = 2;
  std::uint64_t seed = 1;
  std::string output;
};

struct BuildOptions {
  std::string points;
  TreeParams params;
  std::string output;
  std::string stats_output;
};

struct QueryOptions {
  std::string tree;
  std::string ranges;
  bool report = false;
  Format format = Format::Json;
  unsigned threads = 1;
  std::string output;
};

struct VerifyOptions {
  std::string points;
  std::string ranges;
  std::string tree;
};

struct BenchOptions {
  std::string workload;
  unsigned threads = 1;
  std::string output;
};

struct SelftestOptions {
  std::uint64_t seed = 1;
  int instances = 60;
};

int cmd_gen(const GenOptions& o);
int cmd_ranges(const RangesOptions& o);
int cmd_build(const BuildOptions& o);
int cmd_query(const QueryOptions& o);
int cmd_verify(const VerifyOptions& o);
int cmd_bench(const BenchOptions& o);
int cmd_selftest(const SelftestOptions& o);

// PPART_SEED when set and numeric, otherwise `fallback`.
std::uint64_t default_seed(std::uint64_t fallback = 1);

}  // namespace ppart::cli
