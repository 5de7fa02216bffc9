// Copyright 2026 The prig Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PRIG_TORSION_HPP
#define PRIG_TORSION_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "prig/lubin_tate.hpp"

namespace prig {

// A p-power torsion point, stored as the element exponent / p^level of
// Q_p/Z_p. For the multiplicative group it denotes zeta_{p^level}^exponent - 1,
// for a Lubin-Tate group [exponent](lambda_level). The origin is (0, 0);
// otherwise the exponent is a unit in [1, p^level).
struct TorsionPoint {
    unsigned level = 0;
    mpz_class exponent = 0;

    static TorsionPoint origin() { return {}; }
    // value / p^level reduced to lowest terms.
    static TorsionPoint from_fraction(std::uint32_t p, unsigned level, const mpz_class& value);
    // "level:exponent"
    static TorsionPoint parse(std::uint32_t p, std::string_view text);

    bool is_origin() const { return level == 0; }
    std::string str() const;

    friend bool operator==(const TorsionPoint&, const TorsionPoint&) = default;
    friend bool operator<(const TorsionPoint& a, const TorsionPoint& b)
    {
        return a.level != b.level ? a.level < b.level : a.exponent < b.exponent;
    }
};

TorsionPoint torsion_add(std::uint32_t p, const TorsionPoint& a, const TorsionPoint& b);
TorsionPoint torsion_neg(std::uint32_t p, const TorsionPoint& a);
TorsionPoint torsion_scale(std::uint32_t p, const TorsionPoint& a, const mpz_class& c);

using TorsionTuple = std::vector<TorsionPoint>;

// "2:4,1:1"
std::string tuple_str(const TorsionTuple& t);
TorsionTuple parse_tuple(std::uint32_t p, std::string_view text);
unsigned tuple_level(const TorsionTuple& t);

enum class GroupKind { multiplicative, lubin_tate };

// The formal group whose torsion is scanned: G_m with L = X + Y + XY, or a
// built Lubin-Tate group. Level rings and embedded points are cached.
class TorsionGroup {
public:
    static std::shared_ptr<const TorsionGroup> multiplicative(std::uint32_t p, int precision, unsigned degree_bound);
    static std::shared_ptr<const TorsionGroup> lubin_tate(std::shared_ptr<const LTGroup> group);

    GroupKind kind() const { return kind_; }
    std::uint32_t prime() const { return p_; }
    int precision() const { return precision_; }
    unsigned degree_bound() const { return degree_bound_; }
    std::string name() const;
    const std::shared_ptr<const LTGroup>& lt() const { return lt_; }

    RingPtr ring(unsigned level) const;
    // The point inside the level-K ring.
    RingElement embed(const TorsionPoint& t, unsigned K) const;
    std::vector<RingElement> embed(const TorsionTuple& t, unsigned K) const;

    // Group law in two variables.
    MultiSeries law() const;
    // [a](X), one variable.
    MultiSeries endomorphism(const mpz_class& a) const;
    // phi pulled back along cv, with the group's law and endomorphisms in
    // place of the multiplicative ones.
    MultiSeries change_of_vars(const MultiSeries& phi, const ChangeOfVariables& cv) const;

private:
    TorsionGroup(GroupKind kind, std::uint32_t p, int precision, unsigned degree_bound,
                 std::shared_ptr<const LTGroup> lt);

    GroupKind kind_;
    std::uint32_t p_;
    int precision_;
    unsigned degree_bound_;
    std::shared_ptr<const LTGroup> lt_;

    mutable std::mutex mutex_;
    mutable std::map<unsigned, RingPtr> rings_;
    mutable std::map<std::pair<unsigned, TorsionPoint>, RingElement> points_;
};

using GroupPtr = std::shared_ptr<const TorsionGroup>;

inline constexpr std::uint64_t kDefaultEnumerationCap = 1000000;

struct EnumerationMode {
    bool exhaustive = true;
    std::uint64_t count = 0;
    std::uint64_t seed = 0;
    std::uint64_t cap = kDefaultEnumerationCap;

    static EnumerationMode all(std::uint64_t cap = kDefaultEnumerationCap, std::uint64_t seed = 0)
    {
        return {true, 0, seed, cap};
    }
    static EnumerationMode sample(std::uint64_t count, std::uint64_t seed) { return {false, count, seed, 0}; }
};

// Tuples with every coordinate of level <= K. Exhaustive mode lists all
// p^{nK} in index order, or samples `cap` of them with `seed` when there are
// more; sample mode draws `count` distinct tuples from a seeded generator, in
// index order.
std::vector<TorsionTuple> enumerate_torsion(std::uint32_t p, unsigned K, unsigned n, const EnumerationMode& mode);

struct ScanEntry {
    TorsionTuple tuple;
    unsigned level = 0;
    std::vector<ValuationRat> values;
    // Smallest generator valuation; a lower bound when any generator is.
    ValuationRat min_value = ValuationRat::at_least(Rational(0));
    Rational ceiling;

    // Every generator vanishes to the certified ceiling.
    bool is_zero() const;
};

struct ThresholdSet {
    Rational threshold;
    std::vector<std::size_t> members;
    std::vector<std::size_t> undecided;
};

struct LevelProfile {
    unsigned level = 0;
    std::size_t tuples = 0;
    std::size_t zeros = 0;
    std::size_t undecided = 0;
    // Max over the level's tuples of the certified min-generator valuation.
    std::optional<Rational> max_value;
    std::vector<std::size_t> argmax;
};

struct ScanReport {
    std::uint32_t p = 0;
    unsigned nvars = 0;
    unsigned level = 0;
    std::string group;
    bool exhaustive = true;
    std::vector<ScanEntry> entries;
    std::vector<ThresholdSet> sets;
    std::vector<LevelProfile> profile;

    std::size_t zero_count(unsigned max_level) const;
    std::size_t undecided_count() const;
};

struct ScanOptions {
    unsigned level = 1;
    std::vector<Rational> thresholds;
    EnumerationMode mode;
    // 0 picks the hardware concurrency.
    unsigned threads = 0;
};

// Evaluates every generator on every enumerated tuple inside the level-K
// ring. Results do not depend on the thread count.
ScanReport scan(const GroupPtr& group, std::span<const MultiSeries> generators, const ScanOptions& options);

// t'_i = t_{sigma(i)} + sum_{j<i} B_ij t_{sigma(j)}, so that
// (phi o cv)(t) = phi(cv . t). Throws PrecisionError when an entry's modulus
// is below the level it multiplies.
TorsionTuple action_on_torsion(std::uint32_t p, const ChangeOfVariables& cv, const TorsionTuple& t);

struct FrobeniusCheck {
    ValuationRat difference;
    // v(pi) of the coefficient ring; the congruence asserts difference >= it.
    Rational bound;
    Decision holds;
};

// Certified valuation of phi([p] t) - phi(t)^p in the level-K ring.
FrobeniusCheck frobenius_congruence_check(const GroupPtr& group, const MultiSeries& phi, const TorsionTuple& t,
                                          unsigned K);

} // namespace prig

#endif
