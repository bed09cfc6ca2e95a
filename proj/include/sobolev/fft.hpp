#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace sobolev::detail {

// Process-wide cache of FFTW plans keyed by shape and direction. Planning is
// serialized; execution uses the new-array interface and is thread safe.
class FftPlanCache {
public:
    static FftPlanCache& instance() {
        static FftPlanCache cache;
        return cache;
    }

    void execute(const std::vector<int>& shape, int sign, std::complex<double>* in, std::complex<double>* out) {
        fftw_plan plan = get(shape, sign);
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in), reinterpret_cast<fftw_complex*>(out));
    }

    ~FftPlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

private:
    fftw_plan get(const std::vector<int>& shape, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(shape, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::size_t total = 1;
        for (int s : shape) total *= s;
        fftw_complex* a = fftw_alloc_complex(total);
        fftw_complex* b = fftw_alloc_complex(total);
        fftw_plan plan = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), a, b, sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(a);
        fftw_free(b);
        plans_.emplace(key, plan);
        return plan;
    }

    std::mutex mutex_;
    std::map<std::pair<std::vector<int>, int>, fftw_plan> plans_;
};

}  // namespace sobolev::detail
