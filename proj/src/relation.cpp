#include "opc/relation.hpp"

#include <cassert>

namespace opc {

Relation Relation::identity(std::size_t n) {
    Relation r(n);
    for (std::size_t i = 0; i < n; ++i)
        r.set(i, i);
    return r;
}

void Relation::close_preorder() {
    for (std::size_t i = 0; i < n_; ++i)
        set(i, i);
    for (std::size_t k = 0; k < n_; ++k)
        for (std::size_t i = 0; i < n_; ++i)
            if (test(i, k))
                for (std::size_t j = 0; j < n_; ++j)
                    if (test(k, j))
                        set(i, j);
}

bool Relation::is_reflexive() const {
    for (std::size_t i = 0; i < n_; ++i)
        if (!test(i, i))
            return false;
    return true;
}

bool Relation::is_transitive() const {
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k)
            if (test(i, k))
                for (std::size_t j = 0; j < n_; ++j)
                    if (test(k, j) && !test(i, j))
                        return false;
    return true;
}

bool Relation::is_symmetric() const {
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            if (test(i, j) != test(j, i))
                return false;
    return true;
}

bool Relation::includes(const Relation& other) const {
    assert(other.n_ == n_);
    for (std::size_t k = 0; k < bits_.size(); ++k)
        if (other.bits_[k] && !bits_[k])
            return false;
    return true;
}

std::size_t Relation::count() const {
    std::size_t c = 0;
    for (bool b : bits_)
        c += b ? 1 : 0;
    return c;
}

std::vector<std::pair<std::size_t, std::size_t>> Relation::strict_pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            if (i != j && test(i, j))
                out.emplace_back(i, j);
    return out;
}

Relation Relation::intersect(const Relation& other) const {
    assert(other.n_ == n_);
    Relation r(n_);
    for (std::size_t k = 0; k < bits_.size(); ++k)
        r.bits_[k] = bits_[k] && other.bits_[k];
    return r;
}

Relation Relation::compose(const Relation& other) const {
    assert(other.n_ == n_);
    Relation r(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            if (test(i, j))
                for (std::size_t k = 0; k < n_; ++k)
                    if (other.test(j, k))
                        r.set(i, k);
    return r;
}

Relation Relation::converse() const {
    Relation r(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            if (test(i, j))
                r.set(j, i);
    return r;
}

} // namespace opc
