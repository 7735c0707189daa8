/*
 * Copyright (c) 2026, The seedgraph Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "seedgraph/dataset.hpp"

namespace seedgraph {

/// One oracle round: the queried batch and the answers, in batch order.
struct BatchRecord {
  std::size_t iteration = 0;
  std::vector<std::string> ids;
  std::vector<Label> labels;
  double precision = 0.0;   // positives / batch size under the oracle's labels
  std::size_t requested = 0;  // candidate budget K when the strategy has one
  std::size_t scored = 0;     // points scored by a model this round (LR baseline)

  std::size_t positives() const;
};

struct RunLog {
  std::string strategy;
  std::vector<BatchRecord> batches;
  std::vector<std::string> warnings;
  /// Known negatives handed to the LR baseline up front; never queried.
  std::vector<std::string> initial_known;
  /// Set when an oracle failure aborted the run; earlier batches are kept.
  std::optional<std::string> error;

  std::size_t labeled_count() const;
  std::size_t positives_found() const;
  std::vector<std::string> labeled_ids() const;
};

}  // namespace seedgraph
