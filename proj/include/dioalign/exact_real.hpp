#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dioalign/errors.hpp"
#include "dioalign/interval.hpp"

namespace dioalign {

// Canonical element of the multi-quadratic ring generated by square roots of
// squarefree integers: sum over distinct squarefree m >= 1 of r_m * sqrt(m),
// r_m rational (m = 1 carries the rational part). Distinct squarefree
// radicals are linearly independent over Q, so the form is a normal form:
// the value is zero iff the term map is empty. All ring operations and the
// sign are exact.
class QuadForm {
  public:
    QuadForm() = default;
    static QuadForm from_rat(const mpq_class& r);
    // c * sqrt(d); d >= 0, square part extracted (sqrt(12) -> 2 sqrt(3)).
    static QuadForm radical(const mpq_class& c, unsigned long d);

    bool is_zero() const { return terms_.empty(); }
    bool is_rational() const;
    mpq_class rational_value() const;  // requires is_rational()
    std::size_t radical_count() const;

    QuadForm operator+(const QuadForm& o) const;
    QuadForm operator-(const QuadForm& o) const;
    QuadForm operator*(const QuadForm& o) const;
    QuadForm operator-() const;
    QuadForm inverse() const;  // throws ConfigError on zero

    int sign() const;  // exact: -1, 0, +1

    MpInterval enclosure(mpfr_prec_t prec) const;
    const std::map<unsigned long, mpq_class>& terms() const { return terms_; }

    // Canonical text: rat:p/q for rationals, surd:(a+b*sqrt d)/c for one
    // radical, quad:(a0+a1*sqrt m1+...)/c beyond the spec grammar.
    std::string str() const;

  private:
    void put(unsigned long m, const mpq_class& c);
    std::map<unsigned long, mpq_class> terms_;
};

// Adaptive-precision real. Immutable value handle; one of
//   - exact multi-quadratic form (covers rationals and quadratic surds),
//   - decimal literal (scaled integer, exact),
//   - seeded uniform draw in (0,1), digits expanded lazily from
//     (stream, index) by the documented 64-bit mixing,
//   - arithmetic expression over the above (present only when a draw is
//     involved; exact operands fold eagerly).
//
// Comparisons return a certified sign or raise PrecisionCapError after
// refining up to the precision cap. Exact representations never raise.
class ExactReal {
  public:
    enum class Kind { Rational, Surd, Decimal, Draw, Compound };

    ExactReal();  // zero
    static ExactReal from_rat(mpq_class r);
    static ExactReal from_int(long v);
    static ExactReal from_mpz(mpz_class v);
    static ExactReal sqrt_of(unsigned long d);
    static ExactReal decimal(mpz_class mantissa, int exp10);
    static ExactReal draw(std::uint64_t stream, std::uint64_t index);

    // Grammar: rat:<int>/<int> | surd:(<int>+<int>*sqrt<int>)/<int> |
    //          dec:<decimal literal> | rand:<stream>:<index>
    // plus the extended quad:(a0+a1*sqrt m1+...)/c emitted for exact values
    // with two or more radicals.
    static ExactReal parse(std::string_view text);

    Kind kind() const;
    bool is_exact() const;  // no draw in the expression
    // Exact canonical grammar string; nullopt for draw-containing values.
    std::optional<std::string> exact_str() const;
    // Grammar string for leaves and exact values; throws for compounds.
    std::string str() const;

    friend ExactReal operator+(const ExactReal& a, const ExactReal& b);
    friend ExactReal operator-(const ExactReal& a, const ExactReal& b);
    friend ExactReal operator*(const ExactReal& a, const ExactReal& b);
    friend ExactReal operator/(const ExactReal& a, const ExactReal& b);
    friend ExactReal operator-(const ExactReal& a);
    friend ExactReal abs(const ExactReal& a);

    // Certified sign: -1, 0, +1.
    int sign(unsigned cap_bits = kDefaultPrecisionCap) const;
    // sign(a - b) with the same contract.
    static int compare(const ExactReal& a, const ExactReal& b,
                       unsigned cap_bits = kDefaultPrecisionCap);

    bool is_zero(unsigned cap_bits = kDefaultPrecisionCap) const { return sign(cap_bits) == 0; }

    // Exact value as a QuadForm (only when is_exact()).
    const QuadForm& exact_form() const;
    mpq_class rational_value() const;  // requires exact rational value

    MpInterval enclosure(mpfr_prec_t prec) const;
    mpz_class floor(unsigned cap_bits = kDefaultPrecisionCap) const;
    double to_double() const;  // midpoint of a 64-bit enclosure

    struct Node;
    const Node* node() const { return node_.get(); }

  private:
    explicit ExactReal(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

inline ExactReal operator*(long k, const ExactReal& x) { return ExactReal::from_int(k) * x; }

// Convenience: parse a plain rational parameter "a/b" | "a" | "a.b".
mpq_class parse_rational(std::string_view text);
std::string rational_str(const mpq_class& r);

}  // namespace dioalign
