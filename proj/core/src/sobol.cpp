// Copyright 2026 The beacon Authors
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

#include "beacon/sobol.hpp"

#include <bit>
#include <stdexcept>

#include "beacon/random.hpp"

namespace beacon {

namespace {

constexpr int kBits = 32;

// Joe-Kuo direction-number table (primitive polynomial degree s, coefficient
// word a, initial m values), dimensions 2..21. Dimension 1 is the van der
// Corput sequence in base 2.
struct DirectionRow {
    int s;
    std::uint32_t a;
    std::uint32_t m[7];
};

constexpr DirectionRow kJoeKuo[] = {
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
};

constexpr int kMaxDim = 1 + static_cast<int>(sizeof(kJoeKuo) / sizeof(kJoeKuo[0]));

std::vector<std::uint32_t> expand_direction(const DirectionRow& row) {
    std::vector<std::uint32_t> v(kBits);
    const int s = row.s;
    for (int i = 0; i < s && i < kBits; ++i) {
        v[i] = row.m[i] << (kBits - 1 - i);
    }
    for (int i = s; i < kBits; ++i) {
        std::uint32_t value = v[i - s] ^ (v[i - s] >> s);
        for (int k = 1; k < s; ++k) {
            if ((row.a >> (s - 1 - k)) & 1u) value ^= v[i - k];
        }
        v[i] = value;
    }
    return v;
}

}  // namespace

int SobolSequence::max_dimension() { return kMaxDim; }

SobolSequence::SobolSequence(int dimension, std::optional<std::uint64_t> scramble_seed)
    : dim_(dimension) {
    if (dimension < 1) throw std::invalid_argument("SobolSequence: dimension must be >= 1");
    if (dimension > kMaxDim) {
        throw std::invalid_argument("SobolSequence: dimension " + std::to_string(dimension) +
                                    " exceeds the direction-number table (max " +
                                    std::to_string(kMaxDim) + ")");
    }
    direction_.reserve(dim_);
    for (int d = 0; d < dim_; ++d) {
        if (d == 0) {
            // van der Corput: v_k = 2^-(k+1)
            std::vector<std::uint32_t> v(kBits);
            for (int k = 0; k < kBits; ++k) v[k] = 1u << (kBits - 1 - k);
            direction_.push_back(std::move(v));
        } else {
            direction_.push_back(expand_direction(kJoeKuo[d - 1]));
        }
    }
    state_.assign(dim_, 0);
    shift_.assign(dim_, 0);
    if (scramble_seed.has_value()) {
        Rng rng(mix_seed(*scramble_seed, 0x736f626fULL));
        for (int d = 0; d < dim_; ++d) {
            shift_[d] = static_cast<std::uint32_t>(rng.uniform_int(std::int64_t(1) << kBits));
        }
    }
}

Eigen::VectorXd SobolSequence::next() {
    // Gray-code increment: flip the direction number of the lowest zero bit
    // of the previous index. Starting from index_ = 0 means the origin point
    // is never emitted.
    const int bit = std::countr_one(index_);
    if (bit >= kBits) throw std::runtime_error("SobolSequence: index space exhausted");
    ++index_;
    Eigen::VectorXd point(dim_);
    for (int d = 0; d < dim_; ++d) {
        state_[d] ^= direction_[d][bit];
        point[d] = static_cast<double>(state_[d] ^ shift_[d]) * 0x1.0p-32;
    }
    return point;
}

}  // namespace beacon
