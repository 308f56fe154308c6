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

#include "glqvbce/data_file.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little, "data files assume a little-endian host");

namespace glqvbce
{
    namespace
    {
        constexpr char magic[8] = {'G', 'L', 'Q', 'V', 'M', 'A', 'T', '1'};
    }

    void write_matrix(const std::string &path, const arma::cx_mat &X)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("write_matrix: cannot open '" + path + "'.");
        const std::uint64_t dims[2] = {X.n_rows, X.n_cols};
        out.write(magic, 8);
        out.write(reinterpret_cast<const char *>(dims), sizeof(dims));
        out.write(reinterpret_cast<const char *>(X.memptr()), std::streamsize(X.n_elem * sizeof(arma::cx_double)));
        if (!out)
            throw std::runtime_error("write_matrix: write failed for '" + path + "'.");
    }

    arma::cx_mat read_matrix(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("read_matrix: cannot open '" + path + "'.");
        char head[8];
        std::uint64_t dims[2];
        if (!in.read(head, 8) || std::memcmp(head, magic, 8) != 0)
            throw std::runtime_error("read_matrix: bad magic in '" + path + "'.");
        if (!in.read(reinterpret_cast<char *>(dims), sizeof(dims)))
            throw std::runtime_error("read_matrix: truncated header in '" + path + "'.");
        if (dims[0] > (1u << 24) || dims[1] > (1u << 24) || dims[0] * dims[1] > (1ull << 28))
            throw std::runtime_error("read_matrix: implausible dimensions in '" + path + "'.");
        arma::cx_mat X(dims[0], dims[1]);
        if (!in.read(reinterpret_cast<char *>(X.memptr()), std::streamsize(X.n_elem * sizeof(arma::cx_double))))
            throw std::runtime_error("read_matrix: truncated payload in '" + path + "'.");
        if (in.peek() != std::char_traits<char>::eof())
            throw std::runtime_error("read_matrix: trailing bytes in '" + path + "'.");
        return X;
    }
}
