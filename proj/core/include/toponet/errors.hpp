#pragma once

#include <stdexcept>
#include <string>

namespace toponet {

// Requested parameters cannot produce a valid object (e.g. edge count below
// the spanning-tree minimum).
struct InfeasibleError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A bounded stochastic retry loop ran out of attempts.
struct RetriesExhaustedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// DAG source/sink adjustment exhausted its move budget.
struct NotConvergedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace toponet
