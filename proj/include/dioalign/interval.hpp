#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <string>
#include <utility>

namespace dioalign {

// Closed interval [lo, hi] with MPFR endpoints and outward rounding.
// The workhorse behind every adaptive-precision comparison: all entry points
// construct enclosures at some working precision and refine by doubling it.
class MpInterval {
  public:
    explicit MpInterval(mpfr_prec_t prec = 64) : prec_(prec) {
        mpfr_init2(lo_, prec);
        mpfr_init2(hi_, prec);
        mpfr_set_zero(lo_, 1);
        mpfr_set_zero(hi_, 1);
    }
    MpInterval(const MpInterval& o) : prec_(o.prec_) {
        mpfr_init2(lo_, prec_);
        mpfr_init2(hi_, prec_);
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    MpInterval(MpInterval&& o) noexcept : prec_(o.prec_) {
        lo_[0] = o.lo_[0];
        hi_[0] = o.hi_[0];
        o.moved_ = true;
    }
    MpInterval& operator=(const MpInterval& o) {
        if (this != &o) {
            MpInterval tmp(o);
            swap(tmp);
        }
        return *this;
    }
    MpInterval& operator=(MpInterval&& o) noexcept {
        swap(o);
        return *this;
    }
    ~MpInterval() {
        if (!moved_) {
            mpfr_clear(lo_);
            mpfr_clear(hi_);
        }
    }
    void swap(MpInterval& o) noexcept {
        std::swap(prec_, o.prec_);
        std::swap(lo_[0], o.lo_[0]);
        std::swap(hi_[0], o.hi_[0]);
        std::swap(moved_, o.moved_);
    }

    mpfr_prec_t prec() const { return prec_; }

    static MpInterval from_si(long v, mpfr_prec_t prec) {
        MpInterval r(prec);
        mpfr_set_si(r.lo_, v, MPFR_RNDD);
        mpfr_set_si(r.hi_, v, MPFR_RNDU);
        return r;
    }
    static MpInterval from_mpz(const mpz_class& v, mpfr_prec_t prec) {
        MpInterval r(prec);
        mpfr_set_z(r.lo_, v.get_mpz_t(), MPFR_RNDD);
        mpfr_set_z(r.hi_, v.get_mpz_t(), MPFR_RNDU);
        return r;
    }
    static MpInterval from_mpq(const mpq_class& v, mpfr_prec_t prec) {
        MpInterval r(prec);
        mpfr_set_q(r.lo_, v.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(r.hi_, v.get_mpq_t(), MPFR_RNDU);
        return r;
    }
    // [m, m+1] / 2^k  (dyadic enclosure used by seeded draws)
    static MpInterval dyadic(const mpz_class& m, unsigned long k, mpfr_prec_t prec) {
        MpInterval r(prec);
        mpfr_set_z(r.lo_, m.get_mpz_t(), MPFR_RNDD);
        mpfr_div_2ui(r.lo_, r.lo_, k, MPFR_RNDD);
        mpz_class m1 = m + 1;
        mpfr_set_z(r.hi_, m1.get_mpz_t(), MPFR_RNDU);
        mpfr_div_2ui(r.hi_, r.hi_, k, MPFR_RNDU);
        return r;
    }
    static MpInterval sqrt_ui(unsigned long d, mpfr_prec_t prec) {
        MpInterval r(prec);
        mpfr_sqrt_ui(r.lo_, d, MPFR_RNDD);
        mpfr_sqrt_ui(r.hi_, d, MPFR_RNDU);
        return r;
    }

    friend MpInterval operator+(const MpInterval& a, const MpInterval& b) {
        MpInterval r(std::max(a.prec_, b.prec_));
        mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
        return r;
    }
    friend MpInterval operator-(const MpInterval& a, const MpInterval& b) {
        MpInterval r(std::max(a.prec_, b.prec_));
        mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
        mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
        return r;
    }
    friend MpInterval operator-(const MpInterval& a) {
        MpInterval r(a.prec_);
        mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
        mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
        return r;
    }
    friend MpInterval operator*(const MpInterval& a, const MpInterval& b) {
        MpInterval r(std::max(a.prec_, b.prec_));
        mpfr_t t;
        mpfr_init2(t, r.prec_);
        // lo = min of the four products rounded down
        mpfr_mul(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_mul(t, a.lo_, b.hi_, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        mpfr_mul(t, a.hi_, b.lo_, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        mpfr_mul(t, a.hi_, b.hi_, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        // hi = max of the four products rounded up
        mpfr_mul(r.hi_, a.lo_, b.lo_, MPFR_RNDU);
        mpfr_mul(t, a.lo_, b.hi_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_mul(t, a.hi_, b.lo_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_mul(t, a.hi_, b.hi_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
        mpfr_clear(t);
        return r;
    }
    // Division requires 0 outside [b.lo, b.hi]; callers refine b first.
    friend MpInterval operator/(const MpInterval& a, const MpInterval& b);

    MpInterval mul_si(long k) const {
        MpInterval r(prec_);
        if (k >= 0) {
            mpfr_mul_si(r.lo_, lo_, k, MPFR_RNDD);
            mpfr_mul_si(r.hi_, hi_, k, MPFR_RNDU);
        } else {
            mpfr_mul_si(r.lo_, hi_, k, MPFR_RNDD);
            mpfr_mul_si(r.hi_, lo_, k, MPFR_RNDU);
        }
        return r;
    }

    friend MpInterval abs_i(const MpInterval& a) {
        MpInterval r(a.prec_);
        if (mpfr_sgn(a.lo_) >= 0) return a;
        if (mpfr_sgn(a.hi_) <= 0) return -a;
        mpfr_set_zero(r.lo_, 1);
        mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, a.hi_, MPFR_RNDU);
        return r;
    }
    friend MpInterval max_i(const MpInterval& a, const MpInterval& b) {
        MpInterval r(std::max(a.prec_, b.prec_));
        mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
        return r;
    }
    friend MpInterval min_i(const MpInterval& a, const MpInterval& b) {
        MpInterval r(std::max(a.prec_, b.prec_));
        mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_min(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
        return r;
    }
    friend MpInterval exp_i(const MpInterval& a) {
        MpInterval r(a.prec_);
        mpfr_exp(r.lo_, a.lo_, MPFR_RNDD);
        mpfr_exp(r.hi_, a.hi_, MPFR_RNDU);
        return r;
    }

    // +1 certainly positive, -1 certainly negative, 0 certainly zero,
    // 2 cannot tell at this precision.
    int certified_sign() const {
        int slo = mpfr_sgn(lo_), shi = mpfr_sgn(hi_);
        if (slo > 0) return 1;
        if (shi < 0) return -1;
        if (slo == 0 && shi == 0) return 0;
        return 2;
    }
    bool is_exact_zero() const { return mpfr_zero_p(lo_) && mpfr_zero_p(hi_); }
    bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

    double lo_d() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double hi_d() const { return mpfr_get_d(hi_, MPFR_RNDU); }
    double mid_d() const { return 0.5 * (lo_d() + hi_d()); }

    // -1 if certainly a<b, +1 if certainly a>b, 0 if equal as exact points,
    // 2 if overlapping (undecided).
    friend int cmp(const MpInterval& a, const MpInterval& b) {
        if (mpfr_cmp(a.hi_, b.lo_) < 0) return -1;
        if (mpfr_cmp(a.lo_, b.hi_) > 0) return 1;
        if (mpfr_cmp(a.lo_, a.hi_) == 0 && mpfr_cmp(b.lo_, b.hi_) == 0 &&
            mpfr_cmp(a.lo_, b.lo_) == 0)
            return 0;
        return 2;
    }

    const mpfr_t& lo() const { return lo_; }
    const mpfr_t& hi() const { return hi_; }
    mpfr_t& lo_raw() { return lo_; }
    mpfr_t& hi_raw() { return hi_; }

  private:
    mpfr_prec_t prec_;
    mpfr_t lo_, hi_;
    bool moved_ = false;
};

inline MpInterval operator/(const MpInterval& a, const MpInterval& b) {
    if (b.contains_zero()) throw std::domain_error("interval division by interval containing 0");
    MpInterval r(std::max(a.prec(), b.prec()));
    mpfr_t t;
    mpfr_init2(t, r.prec());
    mpfr_div(r.lo_raw(), a.lo(), b.lo(), MPFR_RNDD);
    mpfr_div(t, a.lo(), b.hi(), MPFR_RNDD);
    mpfr_min(r.lo_raw(), r.lo_raw(), t, MPFR_RNDD);
    mpfr_div(t, a.hi(), b.lo(), MPFR_RNDD);
    mpfr_min(r.lo_raw(), r.lo_raw(), t, MPFR_RNDD);
    mpfr_div(t, a.hi(), b.hi(), MPFR_RNDD);
    mpfr_min(r.lo_raw(), r.lo_raw(), t, MPFR_RNDD);
    mpfr_div(r.hi_raw(), a.lo(), b.lo(), MPFR_RNDU);
    mpfr_div(t, a.lo(), b.hi(), MPFR_RNDU);
    mpfr_max(r.hi_raw(), r.hi_raw(), t, MPFR_RNDU);
    mpfr_div(t, a.hi(), b.lo(), MPFR_RNDU);
    mpfr_max(r.hi_raw(), r.hi_raw(), t, MPFR_RNDU);
    mpfr_div(t, a.hi(), b.hi(), MPFR_RNDU);
    mpfr_max(r.hi_raw(), r.hi_raw(), t, MPFR_RNDU);
    mpfr_clear(t);
    return r;
}

}  // namespace dioalign
