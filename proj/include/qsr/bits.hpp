#ifndef QSR_BITS_HPP
#define QSR_BITS_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <initializer_list>

namespace qsr {

/// Fixed-width bitset for sets of relation indices. Sized for the largest
/// shipped universe (218 valid direction sets); small universes only touch
/// word 0.
class Bits {
public:
    static constexpr int kWords = 4;
    static constexpr int kMaxBits = kWords * 64;

    constexpr Bits() = default;

    static Bits none() { return Bits{}; }

    static Bits full(int universe) {
        Bits b;
        for (int i = 0; i < universe; ++i) b.set(i);
        return b;
    }

    static Bits single(int idx) {
        Bits b;
        b.set(idx);
        return b;
    }

    static Bits of(std::initializer_list<int> idxs) {
        Bits b;
        for (int i : idxs) b.set(i);
        return b;
    }

    void set(int idx) { w_[idx >> 6] |= std::uint64_t{1} << (idx & 63); }
    void reset(int idx) { w_[idx >> 6] &= ~(std::uint64_t{1} << (idx & 63)); }
    bool test(int idx) const { return (w_[idx >> 6] >> (idx & 63)) & 1; }

    bool empty() const {
        for (auto w : w_)
            if (w) return false;
        return true;
    }

    int count() const {
        int c = 0;
        for (auto w : w_) c += std::popcount(w);
        return c;
    }

    bool is_subset_of(const Bits& o) const {
        for (int i = 0; i < kWords; ++i)
            if (w_[i] & ~o.w_[i]) return false;
        return true;
    }

    /// Lowest set index, or -1 when empty.
    int lowest() const {
        for (int i = 0; i < kWords; ++i)
            if (w_[i]) return i * 64 + std::countr_zero(w_[i]);
        return -1;
    }

    /// Next set index strictly after `idx`, or -1.
    int next(int idx) const {
        ++idx;
        if (idx >= kMaxBits) return -1;
        int wi = idx >> 6;
        std::uint64_t w = w_[wi] & (~std::uint64_t{0} << (idx & 63));
        while (true) {
            if (w) return wi * 64 + std::countr_zero(w);
            if (++wi >= kWords) return -1;
            w = w_[wi];
        }
    }

    Bits operator&(const Bits& o) const {
        Bits r;
        for (int i = 0; i < kWords; ++i) r.w_[i] = w_[i] & o.w_[i];
        return r;
    }
    Bits operator|(const Bits& o) const {
        Bits r;
        for (int i = 0; i < kWords; ++i) r.w_[i] = w_[i] | o.w_[i];
        return r;
    }
    Bits operator~() const {
        Bits r;
        for (int i = 0; i < kWords; ++i) r.w_[i] = ~w_[i];
        return r;
    }
    Bits& operator&=(const Bits& o) {
        for (int i = 0; i < kWords; ++i) w_[i] &= o.w_[i];
        return *this;
    }
    Bits& operator|=(const Bits& o) {
        for (int i = 0; i < kWords; ++i) w_[i] |= o.w_[i];
        return *this;
    }

    bool operator==(const Bits& o) const = default;

    /// Iteration over set indices: for (int v : bits) ...
    class iterator {
    public:
        iterator(const Bits* b, int idx) : b_(b), idx_(idx) {}
        int operator*() const { return idx_; }
        iterator& operator++() {
            idx_ = b_->next(idx_);
            return *this;
        }
        bool operator!=(const iterator& o) const { return idx_ != o.idx_; }

    private:
        const Bits* b_;
        int idx_;
    };
    iterator begin() const { return iterator(this, lowest()); }
    iterator end() const { return iterator(this, -1); }

private:
    std::array<std::uint64_t, kWords> w_{};
};

} // namespace qsr

#endif
