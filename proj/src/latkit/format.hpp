/*
 * Copyright 2026 The latkit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LATKIT_FORMAT_HPP_
#define LATKIT_FORMAT_HPP_

#include <string>

namespace latkit {

// Shortest general form with 12 significant digits, "." separator, no locale.
std::string format_number(double x, int precision = 12);

}  // namespace latkit

#endif  // LATKIT_FORMAT_HPP_
