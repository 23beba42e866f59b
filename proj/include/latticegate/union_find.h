// Copyright 2026 The latticegate Authors
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

#ifndef LATTICEGATE_UNION_FIND_H
#define LATTICEGATE_UNION_FIND_H

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace latticegate {

/// Disjoint-set forest with path halving and union by size.
class UnionFind {
  public:
    explicit UnionFind(std::size_t n = 0) { reset(n); }

    void reset(std::size_t n) {
        parent_.resize(n);
        std::iota(parent_.begin(), parent_.end(), uint32_t{0});
        size_.assign(n, 1);
    }

    uint32_t find(uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    /// Returns the new root, or the shared root if already joined.
    uint32_t unite(uint32_t a, uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return a;
        }
        if (size_[a] < size_[b]) {
            std::swap(a, b);
        }
        parent_[b] = a;
        size_[a] += size_[b];
        return a;
    }

    uint32_t size_of(uint32_t x) { return size_[find(x)]; }
    std::size_t size() const { return parent_.size(); }

  private:
    std::vector<uint32_t> parent_;
    std::vector<uint32_t> size_;
};

}  // namespace latticegate

#endif
