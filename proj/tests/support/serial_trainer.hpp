#ifndef HCC_TESTS_SUPPORT_SERIAL_TRAINER_HPP
#define HCC_TESTS_SUPPORT_SERIAL_TRAINER_HPP

// Plain serial training loop used as the oracle for the 3D-parallel trainer.
// It consumes the same task definition (teacher, init, batch streams) but
// implements forward, backward, gradient grouping, and Adam with its own
// straightforward loops, mirroring the documented numeric contract:
// microbatch losses average in forward order, gradients accumulate in reverse
// microbatch order and divide by the microbatch count, per-replica gradients
// combine through the ring fold (zero-padded to a dp multiple) and divide by
// dp afterwards.

#include <vector>

#include "hcc/toymodel.hpp"

namespace hcc::testing {

struct OracleResult {
  std::vector<float> step_loss;
  FullModel model;  // final parameters
};

// `dp` controls only the gradient grouping (sample slices and the ring fold);
// the model itself is never sharded.
OracleResult serial_train_oracle(const ToyModelConfig& cfg, int dp, int steps);

}  // namespace hcc::testing

#endif
