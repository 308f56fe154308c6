// SPDX-License-Identifier: Apache-2.0
//
// glqvbce - gridless quantized variational Bayesian channel estimation
// Copyright (C) 2026 The glqvbce authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef GLQVBCE_DATA_FILE_HPP
#define GLQVBCE_DATA_FILE_HPP

#include <armadillo>
#include <string>

namespace glqvbce
{
    // Complex matrix file: 8-byte magic "GLQVMAT1", uint64 rows, uint64 cols, then rows * cols
    // (re, im) float64 pairs in column-major order. Everything little-endian.
    void write_matrix(const std::string &path, const arma::cx_mat &X);
    arma::cx_mat read_matrix(const std::string &path); // throws std::runtime_error on malformed files
}

#endif
