#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace macsim {

/// Nearest-rank quantile on a copy of the sample; q in [0,1].
template <typename T>
double quantile(std::vector<T> sample, double q) {
    if (sample.empty()) return 0.0;
    std::sort(sample.begin(), sample.end());
    const size_t rank = static_cast<size_t>(std::ceil(q * static_cast<double>(sample.size())));
    const size_t idx = rank == 0 ? 0 : rank - 1;
    return static_cast<double>(sample[std::min(idx, sample.size() - 1)]);
}

template <typename T>
double sample_max(const std::vector<T>& sample) {
    if (sample.empty()) return 0.0;
    return static_cast<double>(*std::max_element(sample.begin(), sample.end()));
}

inline double median(std::vector<double> sample) { return quantile(std::move(sample), 0.5); }

} // namespace macsim
