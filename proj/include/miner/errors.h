// Copyright 2026 The MiNER Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MINER_ERRORS_H_
#define MINER_ERRORS_H_

#include <stdexcept>
#include <string>

namespace miner {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MINER_DEFINE_ERROR(Name)          \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

MINER_DEFINE_ERROR(SchemaError);
MINER_DEFINE_ERROR(SpanError);
MINER_DEFINE_ERROR(AlignmentError);
MINER_DEFINE_ERROR(ConfigError);
MINER_DEFINE_ERROR(DataError);
MINER_DEFINE_ERROR(BackendError);
MINER_DEFINE_ERROR(DimensionError);
MINER_DEFINE_ERROR(OverlapError);
MINER_DEFINE_ERROR(PoolExhausted);
MINER_DEFINE_ERROR(CoordError);
MINER_DEFINE_ERROR(EndpointError);
MINER_DEFINE_ERROR(IoError);

#undef MINER_DEFINE_ERROR

// Process-wide warning sink. Defaults to stderr; tests may silence it.
void log_warning(const std::string& message);
void set_warnings_enabled(bool enabled);

}  // namespace miner

#endif  // MINER_ERRORS_H_
