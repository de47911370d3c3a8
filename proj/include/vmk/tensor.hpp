#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vmk/errors.hpp"

namespace vmk {

// Flat collection of named tensors in one contiguous buffer. Registration
// order is the serialization order; gradients/optimizer moments are stores
// with an identical layout, so elementwise passes can run over the raw span.
template <typename T>
struct TensorStore {
    struct Entry {
        std::string name;
        std::vector<std::size_t> dims;
        std::size_t offset = 0;
        std::size_t size = 0;
    };

    std::vector<Entry> entries;
    std::vector<T> data;

    std::size_t add(std::string name, std::vector<std::size_t> dims) {
        std::size_t sz = 1;
        for (std::size_t d : dims) sz *= d;
        Entry e{std::move(name), std::move(dims), data.size(), sz};
        data.resize(data.size() + sz, T{});
        entries.push_back(std::move(e));
        return entries.size() - 1;
    }

    std::size_t index_of(std::string_view name) const {
        for (std::size_t i = 0; i < entries.size(); ++i)
            if (entries[i].name == name) return i;
        throw ConfigError("tensor not found: " + std::string(name));
    }

    T* ptr(std::size_t idx) { return data.data() + entries[idx].offset; }
    const T* ptr(std::size_t idx) const { return data.data() + entries[idx].offset; }
    T* ptr(std::string_view name) { return ptr(index_of(name)); }
    const T* ptr(std::string_view name) const { return ptr(index_of(name)); }

    std::span<T> span(std::size_t idx) {
        return {data.data() + entries[idx].offset, entries[idx].size};
    }
    std::span<const T> span(std::size_t idx) const {
        return {data.data() + entries[idx].offset, entries[idx].size};
    }

    // same names/shapes, zero-filled values
    TensorStore<T> clone_shape() const {
        TensorStore<T> out;
        out.entries = entries;
        out.data.assign(data.size(), T{});
        return out;
    }

    template <typename U>
    TensorStore<U> cast() const {
        TensorStore<U> out;
        out.entries.reserve(entries.size());
        for (const auto& e : entries) out.entries.push_back({e.name, e.dims, e.offset, e.size});
        out.data.assign(data.begin(), data.end());
        return out;
    }

    void zero() { std::fill(data.begin(), data.end(), T{}); }
    std::size_t total_size() const { return data.size(); }
};

}  // namespace vmk
