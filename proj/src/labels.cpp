#include "gmmrec/labels.hpp"

#include "gmmrec/errors.hpp"

namespace gmmrec {

LabelVector::LabelVector(std::vector<std::int8_t> entries) : v_(std::move(entries)) {
    if (v_.size() < 2) throw DomainError("LabelVector: need at least 2 entries");
    for (auto e : v_)
        if (e != 1 && e != -1) throw DomainError("LabelVector: entries must be +1 or -1");
}

std::vector<double> LabelVector::as_doubles() const {
    return {v_.begin(), v_.end()};
}

LabelVector LabelVector::negated() const {
    LabelVector out = *this;
    for (auto& e : out.v_) e = static_cast<std::int8_t>(-e);
    return out;
}

LabelVector sign_vec(std::span<const double> x) {
    std::vector<std::int8_t> s(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] < 0.0 ? -1 : 1;
    return LabelVector(std::move(s));
}

}  // namespace gmmrec
