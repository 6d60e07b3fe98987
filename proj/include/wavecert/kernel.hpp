#pragma once

#include "wavecert/numeric.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wavecert {

/// Response of the evolution update to a single unit value, lambda_i^k for
/// 0 <= k <= K and -k <= i <= k. Entries outside the light cone are zero.
template <SchemeNumber T>
class KernelTable {
public:
    KernelTable(T a, int K) : a_(std::move(a)), K_(K) {
        if (K < 0) {
            throw std::invalid_argument("kernel depth must be nonnegative");
        }
        rows_.resize(static_cast<std::size_t>(K) + 1);
        for (int k = 0; k <= K; ++k) {
            rows_[static_cast<std::size_t>(k)].assign(static_cast<std::size_t>(2 * k + 1), from_double<T>(0.0));
        }
    }

    const T& a() const { return a_; }
    int depth() const { return K_; }

    /// lambda_i^k; zero for |i| > k.
    T at(int i, int k) const {
        if (k < 0 || k > K_) {
            throw std::out_of_range("kernel row out of range");
        }
        if (i < -k || i > k) {
            return from_double<T>(0.0);
        }
        return rows_[static_cast<std::size_t>(k)][static_cast<std::size_t>(i + k)];
    }

    T& ref(int i, int k) { return rows_[static_cast<std::size_t>(k)][static_cast<std::size_t>(i + k)]; }

    /// Row k as entries for i = -k .. k.
    const std::vector<T>& row(int k) const { return rows_.at(static_cast<std::size_t>(k)); }

private:
    T a_;
    int K_;
    std::vector<std::vector<T>> rows_;
};

/// lambda^0 = [1], lambda^1 = [a, 2(1-a), a] and
/// lambda_i^k = a (lambda_{i-1}^{k-1} + lambda_{i+1}^{k-1}) + 2(1-a) lambda_i^{k-1} - lambda_i^{k-2}.
template <SchemeNumber T>
KernelTable<T> lambda_table(const T& a, int K) {
    const T zero = from_double<T>(0.0);
    const T one = from_double<T>(1.0);
    if (!(zero < a) || one < a) {
        throw std::invalid_argument("kernel coefficient a must lie in (0, 1]");
    }
    KernelTable<T> table(a, K);
    table.ref(0, 0) = one;
    if (K == 0) {
        return table;
    }
    const T two_one_minus_a = from_double<T>(2.0) * (one - a);
    table.ref(-1, 1) = a;
    table.ref(0, 1) = two_one_minus_a;
    table.ref(1, 1) = a;
    auto entry = [&](int i, int k) -> const T& {
        return (i < -k || i > k) ? zero : table.row(k)[static_cast<std::size_t>(i + k)];
    };
    for (int k = 2; k <= K; ++k) {
        for (int i = -k; i <= k; ++i) {
            table.ref(i, k) = a * (entry(i - 1, k - 1) + entry(i + 1, k - 1)) +
                              two_one_minus_a * entry(i, k - 1) - entry(i, k - 2);
        }
    }
    return table;
}

struct KernelViolation {
    int i = 0;
    int k = 0;
    std::string what;
};

struct KernelCheckReport {
    /// Rows whose sum differs from k + 1.
    std::vector<KernelViolation> row_sum;
    /// Entries that are negative.
    std::vector<KernelViolation> negative;
    bool ok() const { return row_sum.empty() && negative.empty(); }
};

/// Verifies sum_i lambda_i^k = k + 1 and lambda_i^k >= 0 on every row.
///
/// The row sum test is an equality in T; for binary64 tables `sum_tol` gives
/// a relative allowance.
template <SchemeNumber T>
KernelCheckReport lambda_checks(const KernelTable<T>& table, double sum_tol = 0.0) {
    KernelCheckReport report;
    const T zero = from_double<T>(0.0);
    for (int k = 0; k <= table.depth(); ++k) {
        T sum = zero;
        const auto& r = table.row(k);
        for (std::size_t j = 0; j < r.size(); ++j) {
            sum = sum + r[j];
            if (r[j] < zero) {
                report.negative.push_back({static_cast<int>(j) - k, k, "negative entry"});
            }
        }
        const T expected = from_double<T>(static_cast<double>(k + 1));
        const T diff = abs_value(sum - expected);
        const T allowance = from_double<T>(sum_tol * (k + 1));
        if (allowance < diff) {
            report.row_sum.push_back({0, k, "row sum is not k + 1"});
        }
    }
    return report;
}

}  // namespace wavecert
