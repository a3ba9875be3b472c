// Copyright 2026 The TMTC Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TMTC_ERROR_H_
#define TMTC_ERROR_H_

#include <stdexcept>
#include <string>

namespace tmtc {

// Raised for malformed or inconsistent input data (bad files, mismatched
// corpora, invalid annotations). The CLI maps it to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tmtc

#endif  // TMTC_ERROR_H_
