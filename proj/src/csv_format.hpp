// Copyright 2026 The qmpemba Authors
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

// Shared number formatting for every CSV the library writes.

#ifndef QMPEMBA_SRC_CSV_FORMAT_HPP
#define QMPEMBA_SRC_CSV_FORMAT_HPP

#include <cstdio>
#include <string>

namespace qmpemba::detail {

// 17 significant digits, scientific. Relies on the default "C" numeric locale.
inline std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

} // namespace qmpemba::detail

#endif
