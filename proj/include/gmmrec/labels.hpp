#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gmmrec {

/// Length-n sequence over {-1, +1}, n >= 2.
class LabelVector {
public:
    LabelVector() = default;
    /// Throws DomainError if any entry is not +-1 or if fewer than 2 entries.
    explicit LabelVector(std::vector<std::int8_t> entries);

    std::size_t size() const noexcept { return v_.size(); }
    int operator[](std::size_t i) const noexcept { return v_[i]; }
    std::span<const std::int8_t> entries() const noexcept { return v_; }

    std::vector<double> as_doubles() const;
    LabelVector negated() const;

    bool operator==(const LabelVector&) const = default;

private:
    std::vector<std::int8_t> v_;
};

/// Entrywise sign with sign(0) = +1.
LabelVector sign_vec(std::span<const double> x);

}  // namespace gmmrec
