#pragma once

#include <concepts>
#include <cstdint>

namespace canlift {

// Commutative ring presented as a manager object; elements are plain values
// that only the manager knows how to combine.
template <class R>
concept Ring = requires(const R& r, const typename R::Elem& a,
                        const typename R::Elem& b, std::int64_t n) {
    typename R::Elem;
    { r.zero() } -> std::same_as<typename R::Elem>;
    { r.one() } -> std::same_as<typename R::Elem>;
    { r.from_int(n) } -> std::same_as<typename R::Elem>;
    { r.add(a, b) } -> std::same_as<typename R::Elem>;
    { r.sub(a, b) } -> std::same_as<typename R::Elem>;
    { r.mul(a, b) } -> std::same_as<typename R::Elem>;
    { r.neg(a) } -> std::same_as<typename R::Elem>;
    { r.eq(a, b) } -> std::same_as<bool>;
    { r.is_zero(a) } -> std::same_as<bool>;
};

// Rings with no p-torsion expose exact division by p (throws NotDivisible).
// Only on these is the ghost map injective enough to pull vectors back.
template <class R>
concept PTorsionFreeRing = Ring<R> && R::p_torsion_free &&
    requires(const R& r, const typename R::Elem& a) {
        { r.exact_div_p(a) } -> std::same_as<typename R::Elem>;
    };

}
