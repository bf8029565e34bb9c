#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace opc {

/// Binary relation on {0, ..., n-1}, stored as a dense bit matrix.
class Relation {
public:
    Relation() = default;
    explicit Relation(std::size_t n, bool full = false) : n_(n), bits_(n * n, full) {}

    static Relation identity(std::size_t n);
    static Relation total(std::size_t n) { return Relation(n, true); }

    std::size_t size() const noexcept { return n_; }
    bool test(std::size_t i, std::size_t j) const { return bits_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, bool value = true) { bits_[i * n_ + j] = value; }

    /// Reflexive-transitive closure in place.
    void close_preorder();
    bool is_reflexive() const;
    bool is_transitive() const;
    bool is_preorder() const { return is_reflexive() && is_transitive(); }
    bool is_discrete() const { return *this == identity(n_); }
    bool is_symmetric() const;

    /// True when every pair of `other` is also in this relation.
    bool includes(const Relation& other) const;
    std::size_t count() const;
    /// Pairs (i, j) in the relation with i != j, in row-major order.
    std::vector<std::pair<std::size_t, std::size_t>> strict_pairs() const;

    Relation intersect(const Relation& other) const;
    /// Relational composition: (i, k) iff some j has (i, j) here and (j, k) in `other`.
    Relation compose(const Relation& other) const;
    Relation converse() const;

    friend bool operator==(const Relation&, const Relation&) = default;

private:
    std::size_t n_ = 0;
    std::vector<bool> bits_;
};

} // namespace opc
