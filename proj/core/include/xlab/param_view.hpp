#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "xlab/matrix.hpp"
#include "xlab/mlp.hpp"

namespace xlab {

/// Ordered flat view over every tunable scalar of a model. The optimizer and
/// the gradient checker both walk parameters through this, so parameter and
/// gradient containers only need to register their tensors in the same order.
class ParamView {
public:
    void add(Matrix& m) { chunks_.push_back({m.data(), m.size()}); }
    void add(Vector& v) { chunks_.push_back({v.data(), v.size()}); }
    void add(MlpParams& p) {
        for (auto& l : p.layers) {
            add(l.w);
            add(l.b);
        }
    }

    std::size_t chunk_count() const { return chunks_.size(); }
    std::span<double> chunk(std::size_t i) const { return chunks_[i]; }

    std::size_t total() const {
        std::size_t t = 0;
        for (const auto& c : chunks_) t += c.size();
        return t;
    }

    double get(std::size_t i) const {
        auto [c, o] = locate(i);
        return chunks_[c][o];
    }
    void set(std::size_t i, double v) const {
        auto [c, o] = locate(i);
        chunks_[c][o] = v;
    }

    bool same_shape(const ParamView& other) const {
        if (chunks_.size() != other.chunks_.size()) return false;
        for (std::size_t i = 0; i < chunks_.size(); ++i)
            if (chunks_[i].size() != other.chunks_[i].size()) return false;
        return true;
    }

private:
    std::pair<std::size_t, std::size_t> locate(std::size_t i) const {
        std::size_t c = 0;
        while (i >= chunks_[c].size()) {
            i -= chunks_[c].size();
            ++c;
        }
        return {c, i};
    }

    std::vector<std::span<double>> chunks_;
};

}  // namespace xlab
