// Copyright 2026 The recipegraph Authors.
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

#ifndef RECIPEGRAPH_ERROR_H_
#define RECIPEGRAPH_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace recipegraph {

// Broad failure classes. The CLI maps them to exit codes and the service to
// HTTP statuses.
enum class ErrorCode {
  kInvalidInput,   // malformed document or failed precondition
  kNotFound,       // unknown id
  kConflict,       // stale version
  kTextOrder,      // edit anchored before the validated cursor
  kTyping,         // arc/vertex typing rule violated
  kInternal,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace recipegraph

#endif  // RECIPEGRAPH_ERROR_H_
