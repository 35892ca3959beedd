/*
 * Copyright 2026 The mopar authors
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

#include "mopar/rational.hpp"

namespace mopar {

// Exact Gaussian elimination. Throws SingularSystem naming the first row that
// reduces to zero.
Vector solve_linear_system(Matrix a, Vector b);

Vector mat_vec(const Matrix& a, const Vector& x);

std::size_t rank(Matrix a);

// Basis of {x : a x = 0}; `cols` fixes the dimension when `a` has no rows.
std::vector<Vector> null_space(Matrix a, std::size_t cols);

}  // namespace mopar
