#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "recbench/errors.hpp"
#include "recbench/rng.hpp"

namespace recbench {

struct TensorInfo {
    std::string name;
    size_t offset = 0;
    int rows = 0;
    int cols = 0; // 1 for vectors

    size_t size() const { return static_cast<size_t>(rows) * static_cast<size_t>(cols); }
};

/// Named tensors backed by one contiguous buffer, so the optimizer and the
/// gradient checker can treat a model as a flat vector while forward/backward
/// code works with named views.
template <typename T>
class ParamStore {
public:
    size_t add(std::string name, int rows, int cols = 1) {
        TensorInfo info{std::move(name), values.size(), rows, cols};
        values.resize(values.size() + info.size(), T(0));
        layout_.push_back(info);
        return layout_.size() - 1;
    }

    std::span<T> view(size_t tensor) {
        const TensorInfo& info = layout_[tensor];
        return {values.data() + info.offset, info.size()};
    }
    std::span<const T> view(size_t tensor) const {
        const TensorInfo& info = layout_[tensor];
        return {values.data() + info.offset, info.size()};
    }

    const std::vector<TensorInfo>& layout() const { return layout_; }
    size_t size() const { return values.size(); }

    void zero() { std::fill(values.begin(), values.end(), T(0)); }

    /// Same tensor names/shapes, zero-filled values.
    ParamStore<T> zeros_like() const {
        ParamStore<T> out;
        out.layout_ = layout_;
        out.values.assign(values.size(), T(0));
        return out;
    }

    /// "tensor_name[flat_offset]" for diagnostics.
    std::string name_at(size_t flat_index) const {
        for (const TensorInfo& info : layout_) {
            if (flat_index >= info.offset && flat_index < info.offset + info.size()) {
                return info.name + "[" + std::to_string(flat_index - info.offset) + "]";
            }
        }
        return "param[" + std::to_string(flat_index) + "]";
    }

    std::vector<T> values;

private:
    std::vector<TensorInfo> layout_;
};

/// Gaussian fill, std scaled per tensor by the caller.
template <typename T>
void fill_gaussian(std::span<T> dst, Rng& rng, double std_dev) {
    for (T& v : dst) v = static_cast<T>(rng.next_gaussian() * std_dev);
}

} // namespace recbench
