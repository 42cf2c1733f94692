#pragma once

#include <complex>
#include <cstring>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "inls/grid.hpp"

namespace inls::detail {

/// Process-wide cache of FFTW plans keyed by (dims, sign). Plan creation is
/// serialized; execution copies through a per-plan scratch buffer under the
/// same lock, which keeps callers free of FFTW threading rules.
class FftEngine {
public:
    static FftEngine& instance() {
        static FftEngine engine;
        return engine;
    }

    /// In-place unnormalized DFT (sign = FFTW_FORWARD or FFTW_BACKWARD).
    void transform(const GridSpec& g, Complex* data, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        const Key key{g.dimension, g.points_per_axis, sign};
        auto it = plans_.find(key);
        if (it == plans_.end()) {
            Entry e;
            const std::size_t n = g.total_points();
            e.buffer = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
            std::vector<int> dims(g.dimension, g.points_per_axis);
            e.plan = fftw_plan_dft(g.dimension, dims.data(), e.buffer, e.buffer, sign,
                                   FFTW_ESTIMATE);
            it = plans_.emplace(key, e).first;
        }
        const std::size_t n = g.total_points();
        std::memcpy(it->second.buffer, data, sizeof(fftw_complex) * n);
        fftw_execute(it->second.plan);
        std::memcpy(data, it->second.buffer, sizeof(fftw_complex) * n);
    }

private:
    struct Key {
        int dim, n, sign;
        bool operator<(const Key& o) const {
            if (dim != o.dim) return dim < o.dim;
            if (n != o.n) return n < o.n;
            return sign < o.sign;
        }
    };
    struct Entry {
        fftw_plan plan;
        fftw_complex* buffer;
    };

    FftEngine() = default;
    ~FftEngine() {
        for (auto& [k, e] : plans_) {
            fftw_destroy_plan(e.plan);
            fftw_free(e.buffer);
        }
    }
    FftEngine(const FftEngine&) = delete;

    std::mutex mutex_;
    std::map<Key, Entry> plans_;
};

inline void dft_forward(const GridSpec& g, Complex* data) {
    FftEngine::instance().transform(g, data, FFTW_FORWARD);
}

inline void dft_backward(const GridSpec& g, Complex* data) {
    FftEngine::instance().transform(g, data, FFTW_BACKWARD);
}

}  // namespace inls::detail
