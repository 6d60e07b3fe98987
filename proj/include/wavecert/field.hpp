#pragma once

#include "wavecert/grid.hpp"
#include "wavecert/numeric.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace wavecert {

/// Values q_i^k over [0..i_max] x [0..k_max], stored one time slice after another.
template <SchemeNumber T>
class Field2D {
public:
    Field2D() = default;

    Field2D(int i_max, int k_max)
        : i_max_(i_max), k_max_(k_max),
          values_(static_cast<std::size_t>(i_max + 1) * static_cast<std::size_t>(k_max + 1),
                  from_double<T>(0.0)) {
        if (i_max < 0 || k_max < 0) {
            throw std::invalid_argument("negative field extent");
        }
    }

    explicit Field2D(const GridSpec& g) : Field2D(g.i_max, g.k_max) {}

    int i_max() const { return i_max_; }
    int k_max() const { return k_max_; }
    std::size_t nodes() const { return static_cast<std::size_t>(i_max_) + 1; }
    static constexpr Precision mode() { return precision_of<T>(); }

    T& operator()(int i, int k) { return values_[index(i, k)]; }
    const T& operator()(int i, int k) const { return values_[index(i, k)]; }

    std::span<T> slice(int k) { return {values_.data() + index(0, k), nodes()}; }
    std::span<const T> slice(int k) const { return {values_.data() + index(0, k), nodes()}; }

    std::span<const T> values() const { return values_; }

    bool same_shape(const Field2D& other) const {
        return i_max_ == other.i_max_ && k_max_ == other.k_max_;
    }

    bool operator==(const Field2D&) const = default;

private:
    std::size_t index(int i, int k) const {
        return static_cast<std::size_t>(k) * nodes() + static_cast<std::size_t>(i);
    }

    int i_max_ = 0;
    int k_max_ = 0;
    std::vector<T> values_;
};

template <SchemeNumber T>
void require_same_shape(const Field2D<T>& a, const Field2D<T>& b) {
    if (!a.same_shape(b)) {
        throw std::invalid_argument("field shapes differ");
    }
}

template <SchemeNumber T>
void require_grid_shape(const Field2D<T>& f, const GridSpec& g) {
    if (f.i_max() != g.i_max || f.k_max() != g.k_max) {
        throw std::invalid_argument("field shape does not match the grid");
    }
}

/// Entrywise conversion between number domains.
template <SchemeNumber To, SchemeNumber From>
Field2D<To> convert_field(const Field2D<From>& f) {
    Field2D<To> out(f.i_max(), f.k_max());
    for (int k = 0; k <= f.k_max(); ++k) {
        for (int i = 0; i <= f.i_max(); ++i) {
            if constexpr (std::is_same_v<From, double>) {
                out(i, k) = from_double<To>(f(i, k));
            } else if constexpr (std::is_same_v<To, double>) {
                out(i, k) = to_double(f(i, k));
            } else {
                out(i, k) = To(f(i, k));
            }
        }
    }
    return out;
}

template <SchemeNumber T>
Field2D<T> operator-(const Field2D<T>& a, const Field2D<T>& b) {
    require_same_shape(a, b);
    Field2D<T> out(a.i_max(), a.k_max());
    for (int k = 0; k <= a.k_max(); ++k) {
        for (int i = 0; i <= a.i_max(); ++i) {
            out(i, k) = a(i, k) - b(i, k);
        }
    }
    return out;
}

}  // namespace wavecert
